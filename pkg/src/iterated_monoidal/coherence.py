"""The word problem for M_n(k).

Two independent routes decide whether a morphism A -> B exists:

* ``hom_exists`` applies the pairwise criterion to the pair tables;
* ``rewrite_closure`` / ``reachability_witness`` search the graph of single
  interchange steps (X #j Y) #i (Z #j W) -> (X #i Z) #j (Y #i W), i < j,
  applied anywhere inside an expression.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .expressions import (
    ZERO,
    Expression,
    ExpressionError,
    Node,
    PairTable,
    Zero,
    box,
    leaves,
    pair_table,
    render,
    replace_at,
    subterms,
)


def pair_leq(i: int, same_orientation: bool, j: int) -> bool:
    """May a relation of colour i weaken to colour j (same or reversed order)?"""
    return j >= i if same_orientation else j > i


def table_leq(x: PairTable, y: PairTable) -> bool:
    """The order on pair tables: every pair weakens from ``x`` to ``y``."""
    if x.labels != y.labels:
        raise ExpressionError(f"label sets differ: {x.labels} vs {y.labels}")
    px, py = x.position, y.position
    for (a, b), i, j in zip(combinations(x.labels, 2), x.colors, y.colors):
        same = (px[a] < px[b]) == (py[a] < py[b])
        if not pair_leq(i, same, j):
            return False
    return True


def _check_same_leaves(a: Expression, b: Expression):
    la, lb = leaves(a), leaves(b)
    if len(set(la)) != len(la) or len(set(lb)) != len(lb):
        raise ExpressionError("expressions must use each generator once")
    if sorted(la) != sorted(lb):
        raise ExpressionError(f"generator sets differ: {sorted(la)} vs {sorted(lb)}")


def hom_exists(a: Expression, b: Expression) -> bool:
    _check_same_leaves(a, b)
    return table_leq(pair_table(a), pair_table(b))


def leq_matrix(tables: Sequence[PairTable]) -> np.ndarray:
    """Vectorised ``table_leq`` over all ordered pairs of ``tables``.

    ``M[x, y]`` is True iff ``tables[x] <= tables[y]``.
    """
    if not tables:
        return np.zeros((0, 0), dtype=bool)
    labels = tables[0].labels
    pairs = list(combinations(labels, 2))
    ops = np.array([t.colors for t in tables], dtype=np.int16).reshape(len(tables), len(pairs))
    sign = np.array(
        [[t.position[a] < t.position[b] for a, b in pairs] for t in tables], dtype=bool
    ).reshape(len(tables), len(pairs))
    out = np.ones((len(tables), len(tables)), dtype=bool)
    for p in range(len(pairs)):
        i = ops[:, p][:, None]
        j = ops[:, p][None, :]
        flipped = sign[:, p][:, None] != sign[:, p][None, :]
        out &= j >= i + flipped
    return out


# ------------------------------------------------------------------ rewriting

@dataclass(frozen=True)
class RewriteStep:
    """One interchange (X #j Y) #i (Z #j W) -> (X #i Z) #j (Y #i W).

    ``path`` locates the #i node; the matched factors are its children
    ``start:mid`` (X #j Y) and ``mid:end`` (Z #j W).
    """

    path: tuple
    i: int
    j: int
    start: int
    mid: int
    end: int
    x: Expression
    y: Expression
    z: Expression
    w: Expression

    def __post_init__(self):
        if not self.i < self.j:
            raise ValueError("interchange needs i < j")
        if not is_nontrivial(self.x, self.y, self.z, self.w):
            raise ValueError("degenerate interchange (an identity by the unit axioms)")

    @property
    def source(self) -> Expression:
        return box(self.i, [box(self.j, [self.x, self.y]), box(self.j, [self.z, self.w])])

    @property
    def target(self) -> Expression:
        return box(self.j, [box(self.i, [self.x, self.z]), box(self.i, [self.y, self.w])])

    def to_json(self) -> dict:
        return {
            "path": list(self.path),
            "i": self.i,
            "j": self.j,
            "splits": {k: render(v) for k, v in zip("xyzw", (self.x, self.y, self.z, self.w))},
        }


def is_nontrivial(x, y, z, w) -> bool:
    zero = [isinstance(t, Zero) for t in (x, y, z, w)]
    zx, zy, zz, zw = zero
    return not ((zx and zy) or (zz and zw) or (zy and zw) or (zx and zz))


def _j_splits(e: Expression, j: int):
    """All ways of writing ``e`` as X #j Y."""
    if isinstance(e, Node) and e.op == j:
        ch = e.children
        for t in range(len(ch) + 1):
            yield box(j, ch[:t]), box(j, ch[t:])
    else:
        yield e, ZERO
        yield ZERO, e


def one_step_rewrites(a: Expression, n: int) -> list[tuple[RewriteStep, Expression]]:
    """Every expression reachable by a single interchange, one step per target.

    Sorted by the rendering of the target; the kept step is the first one
    found for that target.
    """
    found: dict = {}
    for path, node in subterms(a):
        if not isinstance(node, Node):
            continue
        i, ch = node.op, node.children
        m = len(ch)
        for start in range(m):
            for end in range(start + 2, m + 1):
                for mid in range(start + 1, end):
                    left = box(i, ch[start:mid])
                    right = box(i, ch[mid:end])
                    for j in range(i + 1, n + 1):
                        for x, y in _j_splits(left, j):
                            for z, w in _j_splits(right, j):
                                if not is_nontrivial(x, y, z, w):
                                    continue
                                step = RewriteStep(path, i, j, start, mid, end, x, y, z, w)
                                new_node = box(i, ch[:start] + (step.target,) + ch[end:])
                                target = replace_at(a, path, new_node)
                                if target != a and target not in found:
                                    found[target] = step
    return sorted(((s, t) for t, s in found.items()), key=lambda st: render(st[1]))


def rewrite_closure(a: Expression, n: int) -> set:
    seen = {a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for _, y in one_step_rewrites(x, n):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def reachability_witness(a: Expression, b: Expression, n: int, depth: int | None = None):
    """Shortest chain of interchange steps from ``a`` to ``b``.

    Returns a list of ``(step, intermediate)`` pairs (empty when a == b), or
    ``None`` if ``b`` is not reachable within ``depth`` steps.
    """
    _check_same_leaves(a, b)
    parent = {a: None}
    frontier = [a]
    level = 0
    while frontier and b not in parent:
        if depth is not None and level >= depth:
            break
        nxt = []
        for x in frontier:
            for step, y in one_step_rewrites(x, n):
                if y not in parent:
                    parent[y] = (x, step)
                    nxt.append(y)
        frontier = nxt
        level += 1
    if b not in parent:
        return None
    chain = []
    cur = b
    while parent[cur] is not None:
        prev, step = parent[cur]
        chain.append((step, cur))
        cur = prev
    return chain[::-1]


def witness_to_json(a: Expression, chain) -> dict:
    return {
        "source": render(a),
        "steps": [dict(step.to_json(), result=render(e)) for step, e in chain],
    }


def _reach_rows(args):
    objects, n, rows = args
    index = {e: i for i, e in enumerate(objects)}
    out = []
    for r in rows:
        row = np.zeros(len(objects), dtype=bool)
        for e in rewrite_closure(objects[r], n):
            row[index[e]] = True
        out.append(row)
    return rows, out


def reachability_matrix(objects: Sequence[Expression], n: int, jobs: int = 1) -> np.ndarray:
    """``R[x, y]`` is True iff ``objects[y]`` is in the rewrite closure of ``objects[x]``."""
    objects = list(objects)
    index = {e: i for i, e in enumerate(objects)}
    succ = [[index[t] for _, t in one_step_rewrites(e, n)] for e in objects]
    if jobs > 1 and len(objects) > 64:
        chunks = [list(range(s, len(objects), jobs)) for s in range(jobs)]
        reach = np.zeros((len(objects), len(objects)), dtype=bool)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rows, out in pool.map(_reach_rows, [(objects, n, c) for c in chunks]):
                for r, row in zip(rows, out):
                    reach[r] = row
        return reach
    reach = np.zeros((len(objects), len(objects)), dtype=bool)
    for s in range(len(objects)):
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        reach[s, list(seen)] = True
    return reach
