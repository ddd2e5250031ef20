"""The complete graph operad K^(n) and the Smith filtration Gamma^(n).

An element of K^(n)(k) is a ``PairTable``: an acyclic orientation of the
complete graph (stored as a total order) with edge colours in 1..n.
Simplices of Gamma(k) are chains of permutations, written as sequences of
labels; a simplex lies in Gamma^(n)(k) when every pair of labels swaps its
relative order at most n-1 times along the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Sequence

from .coherence import table_leq
from .expressions import Expression, ExpressionError, PairTable, leaves


def k_leq(x: PairTable, y: PairTable) -> bool:
    if x.n != y.n:
        raise ExpressionError(f"colour bounds differ: {x.n} vs {y.n}")
    return table_leq(x, y)


def k_enumerate(n: int, k: int) -> list[PairTable]:
    """All n^C(k,2) * k! coloured acyclic orientations on labels 1..k."""
    labels = range(1, k + 1)
    m = k * (k - 1) // 2
    return [
        PairTable(n, order, colors)
        for order in permutations(labels)
        for colors in product(range(1, n + 1), repeat=m)
    ]


@lru_cache(maxsize=None)
def _relabel_index(labels: tuple, sigma: tuple) -> tuple:
    """Where each pair of the relabelled table takes its colour from."""
    s = {a: sigma[a - 1] if a <= len(sigma) else a for a in labels}
    inv = {v: a for a, v in s.items()}
    if len(inv) != len(s):
        raise ExpressionError("relabelling is not injective on the labels")
    old = {p: i for i, p in enumerate(combinations(labels, 2))}
    idx = []
    for p, q in combinations(sorted(inv), 2):
        a, b = inv[p], inv[q]
        idx.append(old[(a, b) if a < b else (b, a)])
    return tuple(idx)


def k_relabel(x: PairTable, sigma: Sequence[int]) -> PairTable:
    """Act by the permutation a -> sigma[a-1] on vertices."""
    sigma = tuple(sigma)
    idx = _relabel_index(x.labels, sigma)
    m = len(sigma)
    order = tuple(sigma[a - 1] if a <= m else a for a in x.order)
    return PairTable(x.n, order, tuple(x.colors[i] for i in idx))


@lru_cache(maxsize=None)
def _standard(k: int) -> tuple:
    return tuple(range(1, k + 1))


@lru_cache(maxsize=None)
def _compose_index(sizes: tuple) -> tuple:
    """Gather indices into outer.colors + inner_1.colors + ... for a block substitution."""
    k = len(sizes)
    block = []
    for j, m in enumerate(sizes):
        block.extend((j, a) for a in range(1, m + 1))
    outer_pairs = {p: i for i, p in enumerate(combinations(range(1, k + 1), 2))}
    base, inner_pairs = [k * (k - 1) // 2], []
    for m in sizes:
        inner_pairs.append({p: i for i, p in enumerate(combinations(range(1, m + 1), 2))})
        base.append(base[-1] + m * (m - 1) // 2)
    idx = []
    for (ja, la), (jb, lb) in combinations(block, 2):
        if ja == jb:
            idx.append(base[ja] + inner_pairs[ja][(la, lb)])
        else:
            idx.append(outer_pairs[(ja + 1, jb + 1)])
    return tuple(idx)


def k_compose(outer: PairTable, inners: Sequence[PairTable]) -> PairTable:
    """Block substitution: cross-block edges follow ``outer``, others the inners."""
    k = len(outer.order)
    if len(inners) != k or outer.labels != _standard(k):
        raise ExpressionError(f"outer has arity {k} but {len(inners)} inputs were given")
    offsets, total, pool, sizes = [], 0, list(outer.colors), []
    for inner in inners:
        m = len(inner.order)
        if inner.labels != _standard(m):
            raise ExpressionError("inner tables must be on labels 1..m")
        offsets.append(total)
        sizes.append(m)
        total += m
        pool.extend(inner.colors)
    idx = _compose_index(tuple(sizes))
    order = tuple(a + offsets[j - 1] for j in outer.order for a in inners[j - 1].order)
    n = max([outer.n] + [t.n for t in inners])
    return PairTable(n, order, tuple(pool[i] for i in idx))


# -------------------------------------------------------------------- Gamma

@dataclass(frozen=True)
class GammaSimplex:
    """A chain of permutations of {1..k}, each written as a label sequence."""

    chain: tuple

    def __post_init__(self):
        if not self.chain:
            raise ValueError("a simplex needs at least one vertex")
        k = len(self.chain[0])
        for p in self.chain:
            if sorted(p) != list(range(1, k + 1)):
                raise ValueError(f"{p} is not a permutation of 1..{k}")

    @property
    def k(self) -> int:
        return len(self.chain[0])

    @property
    def dim(self) -> int:
        return len(self.chain) - 1

    def is_degenerate(self) -> bool:
        return any(p == q for p, q in zip(self.chain, self.chain[1:]))

    def face(self, i: int) -> "GammaSimplex":
        return GammaSimplex(self.chain[:i] + self.chain[i + 1:])

    def to_json(self) -> dict:
        return {"k": self.k, "chain": [list(p) for p in self.chain]}

    @classmethod
    def from_json(cls, data) -> "GammaSimplex":
        chain = cls(tuple(tuple(p) for p in data["chain"]))
        if chain.k != data.get("k", chain.k):
            raise ValueError("k does not match the permutations")
        return chain


def pair_flips(s: GammaSimplex) -> dict:
    """Number of relative-order changes of each pair {a, b} along the chain."""
    pos = [{a: i for i, a in enumerate(p)} for p in s.chain]
    out = {}
    for a, b in combinations(range(1, s.k + 1), 2):
        signs = [q[a] < q[b] for q in pos]
        out[(a, b)] = sum(u != v for u, v in zip(signs, signs[1:]))
    return out


def gamma_member(s: GammaSimplex, n: int) -> bool:
    return all(f <= n - 1 for f in pair_flips(s).values())


def gamma_restrict(s: GammaSimplex, a: int, b: int) -> GammaSimplex:
    """Image under the restriction to the pair {a, b}, relabelled to {1, 2}."""
    ren = {a: 1, b: 2} if a < b else {a: 2, b: 1}
    return GammaSimplex(tuple(tuple(ren[x] for x in p if x in ren) for p in s.chain))


def gamma_simplices(n: int, k: int) -> dict[int, list[GammaSimplex]]:
    """Nondegenerate simplices of Gamma^(n)(k), graded by dimension."""
    if n < 1:
        raise ValueError("need n >= 1")
    labels = tuple(range(1, k + 1))
    perms = list(permutations(labels))
    pairs = list(combinations(labels, 2))
    pos = {p: {a: i for i, a in enumerate(p)} for p in perms}

    def step_flips(p, q):
        return tuple(int((pos[p][a] < pos[p][b]) != (pos[q][a] < pos[q][b])) for a, b in pairs)

    flips = {(p, q): step_flips(p, q) for p in perms for q in perms if p != q}
    graded: dict[int, list] = {}

    def extend(chain, used):
        graded.setdefault(len(chain) - 1, []).append(GammaSimplex(tuple(chain)))
        last = chain[-1]
        for q in perms:
            if q == last:
                continue
            new = tuple(u + f for u, f in zip(used, flips[(last, q)]))
            if max(new, default=0) <= n - 1:
                extend(chain + [q], new)

    zero = tuple(0 for _ in pairs)
    for p in perms:
        extend([p], zero)
    return {d: graded[d] for d in sorted(graded)}


def gamma_compose(outer: GammaSimplex, inners: Sequence[GammaSimplex]) -> GammaSimplex:
    """Barratt-Eccles composition: vertexwise block substitution of permutations."""
    if len(inners) != outer.k:
        raise ValueError(f"outer has arity {outer.k} but {len(inners)} inputs were given")
    if any(t.dim != outer.dim for t in inners):
        raise ValueError("composition is defined on simplices of equal dimension")
    offsets, total = [], 0
    for t in inners:
        offsets.append(total)
        total += t.k
    chain = []
    for v, sigma in enumerate(outer.chain):
        chain.append(tuple(a + offsets[j - 1] for j in sigma for a in inners[j - 1].chain[v]))
    return GammaSimplex(tuple(chain))


def forget(x: PairTable) -> tuple:
    """Forget the colouring, keeping the orientation as a permutation."""
    return x.order


def forget_and_map(chain: Sequence[Expression]) -> GammaSimplex:
    """Underlying permutations of a chain of objects (possibly degenerate)."""
    return GammaSimplex(tuple(leaves(e) for e in chain))
