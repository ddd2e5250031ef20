"""Run-level settings shared by the CLI, the scripts and the test-suite."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class SamplingConfig:
    """Seeded random-configuration sampling."""

    seed: int = 1729
    samples: int = 500
    denominator: int = 64


@dataclass(frozen=True)
class Limits:
    """Desk-scale guards; requests above these are refused with an estimate."""

    max_objects: int = 20_000       # k! * a_k, size of an enumeration
    max_pairs: int = 400_000        # exhaustive pairwise checks
    max_chains: int = 2_000_000     # simplices in an order complex or Gamma complex


def default_jobs() -> int:
    raw = os.environ.get("MOL_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


SAMPLING = SamplingConfig()
LIMITS = Limits()
