"""Exhaustive generation of M_n(k), shape counts and the operad structure."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

from .coherence import leq_matrix
from .expressions import (
    ZERO,
    Expression,
    ExpressionError,
    Gen,
    Node,
    box,
    is_object,
    leaves,
    pair_table,
    render,
    restrict,
    relabel,
)
from .poset import Poset


def ordered_partitions(items: Sequence, min_blocks: int = 1):
    """All ordered set partitions of ``items`` into at least ``min_blocks`` blocks.

    Blocks keep the relative order of ``items``.
    """
    items = tuple(items)
    if not items:
        if min_blocks <= 0:
            yield ()
        return
    for r in range(1, len(items) + 1):
        for first in combinations(items, r):
            rest = tuple(x for x in items if x not in first)
            if not rest:
                if min_blocks <= 1:
                    yield (first,)
                continue
            for tail in ordered_partitions(rest, min_blocks - 1):
                yield (first,) + tail


@lru_cache(maxsize=None)
def _generate(labels: tuple, n: int, forbid: int) -> tuple:
    """Objects on ``labels`` whose top operation is not ``forbid``."""
    if len(labels) == 1:
        return (Gen(labels[0]),)
    out = []
    for op in range(1, n + 1):
        if op == forbid:
            continue
        for blocks in ordered_partitions(labels, 2):
            for kids in product(*(_generate(b, n, op) for b in blocks)):
                out.append(Node(op, kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _generate_levelled(labels: tuple, n: int, min_op: int) -> tuple:
    """Level-ordered objects on ``labels`` using only operations >= ``min_op``."""
    if len(labels) == 1:
        return (Gen(labels[0]),)
    out = []
    for op in range(min_op, n + 1):
        for blocks in ordered_partitions(labels, 2):
            for kids in product(*(_generate_levelled(b, n, op + 1) for b in blocks)):
                out.append(Node(op, kids))
    return tuple(out)


@lru_cache(maxsize=64)
def enumerate_objects(n: int, k: int, milgram_only: bool = False) -> tuple:
    """All objects of M_n(k) (or its Milgram subcategory), sorted by rendering."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if k == 0:
        return (ZERO,)
    labels = tuple(range(1, k + 1))
    objs = _generate_levelled(labels, n, 1) if milgram_only else _generate(labels, n, 0)
    return tuple(sorted(objs, key=render))



# ------------------------------------------------------------------ counting

@dataclass(frozen=True)
class CountRow:
    k: int
    shapes: int
    objects: int
    ratio: Fraction | None


@dataclass(frozen=True)
class CountTable:
    n: int
    rows: tuple

    def shapes(self) -> list[int]:
        return [r.shapes for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "shapes", "objects", "ratio"])
        for r in self.rows:
            ratio = "" if r.ratio is None else f"{float(r.ratio):.10f}"
            w.writerow([r.k, r.shapes, r.objects, ratio])
        return buf.getvalue()


def shape_recurrence(n: int, k_max: int) -> list[int]:
    """a^n_k for k = 0..k_max.

    a_k = n a_1 a_{k-1} + sum_{i=2}^{k-1} (n-1) a_i a_{k-i}, with the summation
    bounds running to k-1 (indices in terms of k, not n).
    """
    a = [1, 1]
    for k in range(2, k_max + 1):
        total = n * a[1] * a[k - 1]
        for i in range(2, k):
            total += (n - 1) * a[i] * a[k - i]
        a.append(total)
    return a[: k_max + 1]


def shape_counts(n: int, k_max: int, cross_check_upto: int = 0) -> CountTable:
    """Shape counts from the recurrence, optionally checked against enumeration."""
    if n < 1:
        raise ValueError("need n >= 1")
    a = shape_recurrence(n, k_max)
    rows = []
    for k in range(k_max + 1):
        if k <= cross_check_upto:
            count = len(enumerate_objects(n, k))
            if count != math.factorial(k) * a[k]:
                raise AssertionError(f"recurrence disagrees with enumeration at n={n}, k={k}")
        ratio = Fraction(a[k + 1], a[k]) if k + 1 <= k_max else None
        rows.append(CountRow(k, a[k], math.factorial(k) * a[k], ratio))
    return CountTable(n, tuple(rows))


def closed_form_shapes(n: int, k: int) -> int:
    """Closed forms for k <= 4."""
    forms = {0: 1, 1: 1, 2: n, 3: 2 * n**2 - n, 4: 5 * n**3 - 5 * n**2 + n}
    return forms[k]


def ratio_limit(n: int) -> float:
    return 2 * n - 1 + 2 * math.sqrt(n * n - n)


# ------------------------------------------------------ degeneracy and operad

def degeneracy(e: Expression, j: int) -> Expression:
    """Delete generator j and close the gap in the labels."""
    ls = leaves(e)
    if j not in ls:
        raise ExpressionError(f"label {j} does not occur")
    r = restrict(e, [a for a in ls if a != j])
    return relabel(r, {a: a - 1 for a in ls if a > j})


def operad_compose(outer: Expression, inners: Sequence[Expression]) -> Expression:
    """Substitute ``inners[j-1]`` for generator j, shifting labels blockwise."""
    ls = leaves(outer)
    k = len(ls)
    if len(inners) != k or sorted(ls) != list(range(1, k + 1)):
        raise ExpressionError(f"outer has arity {k} but {len(inners)} inputs were given")
    offsets = []
    total = 0
    for inner in inners:
        if isinstance(inner, Gen) and inner.label == 1:
            m = 1
        else:
            m = len(leaves(inner))
            if not is_object(inner, m):
                raise ExpressionError(f"inner {render(inner)} is not an object of M_n({m})")
        offsets.append(total)
        total += m

    def shift(x, d):
        if isinstance(x, Gen):
            return Gen(x.label + d)
        if isinstance(x, Node):
            return Node(x.op, tuple(shift(c, d) for c in x.children))
        return x

    def go(x):
        if isinstance(x, Gen):
            j = x.label - 1
            return shift(inners[j], offsets[j])
        if isinstance(x, Node):
            return box(x.op, [go(c) for c in x.children])
        return x

    return go(outer)


def sigma_orbits(objects: Sequence[Expression], k: int) -> list[set]:
    """Orbits of the label-permuting action of Sigma_k on ``objects``."""
    from itertools import permutations

    remaining = set(objects)
    orbits = []
    perms = list(permutations(range(1, k + 1)))
    while remaining:
        e = next(iter(sorted(remaining, key=render)))
        orbit = {relabel(e, dict(zip(range(1, k + 1), p))) for p in perms}
        orbits.append(orbit)
        remaining -= orbit
    return orbits


def build_poset(n: int, k: int, milgram_only: bool = False) -> Poset:
    objs = enumerate_objects(n, k, milgram_only)
    tables = [pair_table(e, n) for e in objs]
    return Poset(objs, leq_matrix(tables), [render(e) for e in objs])


def covers(n: int, k: int, a: Expression) -> list:
    """Upper covers of ``a`` in M_n(k)."""
    return build_poset(n, k).upper_covers(a)
