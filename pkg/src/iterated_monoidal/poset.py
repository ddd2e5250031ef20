"""Finite posets given by a boolean order matrix."""

from __future__ import annotations

from functools import cached_property
from typing import Callable, Hashable, Sequence

import numpy as np


class Poset:
    """A finite poset on ``elements`` with ``leq[x, y]`` meaning x <= y.

    ``keys`` are strings used for display and canonical sorting.
    """

    def __init__(self, elements: Sequence[Hashable], leq: np.ndarray, keys: Sequence[str] | None = None):
        self.elements = list(elements)
        self.leq_matrix = np.asarray(leq, dtype=bool)
        n = len(self.elements)
        if self.leq_matrix.shape != (n, n):
            raise ValueError("order matrix does not match the number of elements")
        self.keys = [str(e) for e in self.elements] if keys is None else list(keys)
        self._index = {e: i for i, e in enumerate(self.elements)}

    @classmethod
    def from_relation(cls, elements, leq: Callable, keys=None) -> "Poset":
        m = np.array([[leq(a, b) for b in elements] for a in elements], dtype=bool)
        return cls(elements, m.reshape(len(elements), len(elements)), keys)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, e):
        return e in self._index

    def index(self, e) -> int:
        return self._index[e]

    def leq(self, a, b) -> bool:
        return bool(self.leq_matrix[self._index[a], self._index[b]])

    def is_partial_order(self) -> bool:
        m = self.leq_matrix
        if not m.diagonal().all():
            return False
        if (m & m.T & ~np.eye(len(m), dtype=bool)).any():
            return False
        composed = (m.astype(np.float32) @ m.astype(np.float32)) > 0
        return not (composed & ~m).any()

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        strict = self.leq_matrix & ~np.eye(len(self), dtype=bool)
        s = strict.astype(np.float32)
        return strict & ~((s @ s) > 0)

    def upper_covers(self, e) -> list:
        row = self.cover_matrix[self._index[e]]
        return [self.elements[j] for j in np.flatnonzero(row)]

    def cover_edges(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.cover_matrix))]

    def minimal(self) -> list:
        strict = self.leq_matrix & ~np.eye(len(self), dtype=bool)
        return [self.elements[j] for j in np.flatnonzero(~strict.any(axis=0))]

    def maximal(self) -> list:
        strict = self.leq_matrix & ~np.eye(len(self), dtype=bool)
        return [self.elements[j] for j in np.flatnonzero(~strict.any(axis=1))]

    def maximal_chains(self) -> list[tuple[int, ...]]:
        """Saturated chains from minimal to maximal elements (as index tuples)."""
        cov = self.cover_matrix
        ups = [list(np.flatnonzero(cov[i])) for i in range(len(self))]
        starts = [i for i in range(len(self)) if not cov[:, i].any()]
        out = []

        def walk(path):
            nxt = ups[path[-1]]
            if not nxt:
                out.append(tuple(int(p) for p in path))
            for j in nxt:
                walk(path + [j])

        for s in starts:
            walk([s])
        return out

    def subposet(self, indices: Sequence[int]) -> "Poset":
        idx = list(indices)
        return Poset(
            [self.elements[i] for i in idx],
            self.leq_matrix[np.ix_(idx, idx)],
            [self.keys[i] for i in idx],
        )

    def downset(self, e) -> "Poset":
        col = self.leq_matrix[:, self._index[e]]
        return self.subposet(np.flatnonzero(col))

    def relation_edges(self) -> list[tuple[int, int]]:
        """All strict comparabilities x < y."""
        strict = self.leq_matrix & ~np.eye(len(self), dtype=bool)
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(strict))]

    def to_dot(self, name: str = "hasse", edges: str = "covers") -> str:
        """DOT output; ``edges="relations"`` draws every strict comparability."""
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, key in enumerate(self.keys):
            lines.append(f'  n{i} [label="{key}"];')
        for a, b in (self.cover_edges() if edges == "covers" else self.relation_edges()):
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"
