"""Permutohedra as downsets of the Milgram subposet, retractions and the q-map.

P_k is the poset of Milgram objects below 1 #2 2 #2 ... #2 k.  Its elements
are A_1 #1 ... #1 A_s with each A_r an ascending #2-word, i.e. ordered set
partitions of {1..k}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Sequence

import numpy as np

from .coherence import leq_matrix
from .enumeration import enumerate_objects
from .expressions import (
    Expression,
    ExpressionError,
    Node,
    box,
    gens,
    leaves,
    pair_table,
    permute,
    render,
    restrict,
)
from .poset import Poset


@dataclass(frozen=True)
class OrderedPartition:
    blocks: tuple

    def __post_init__(self):
        seen = [a for b in self.blocks for a in b]
        if any(not b for b in self.blocks) or len(set(seen)) != len(seen):
            raise ValueError("blocks must be nonempty and disjoint")

    @classmethod
    def of(cls, blocks: Sequence[Sequence[int]]) -> "OrderedPartition":
        return cls(tuple(tuple(sorted(b)) for b in blocks))

    @property
    def labels(self) -> tuple:
        return tuple(sorted(a for b in self.blocks for a in b))

    def to_expression(self) -> Expression:
        return box(1, [box(2, gens(*b)) for b in self.blocks])

    @classmethod
    def from_expression(cls, e: Expression, sort_blocks: bool = False) -> "OrderedPartition":
        parts = e.children if isinstance(e, Node) and e.op == 1 else (e,)
        blocks = []
        for p in parts:
            if isinstance(p, Node) and (p.op != 2 or any(isinstance(c, Node) for c in p.children)):
                raise ExpressionError(f"{render(e)} is not a permutohedron element")
            ls = leaves(p)
            if sort_blocks:
                ls = tuple(sorted(ls))
            elif list(ls) != sorted(ls):
                raise ExpressionError(f"block {render(p)} is not ascending")
            blocks.append(ls)
        return cls(tuple(blocks))

    def coarsens(self, other: "OrderedPartition") -> bool:
        """True if ``self`` is obtained by merging runs of consecutive blocks of ``other``."""
        it = iter(other.blocks)
        for block in self.blocks:
            acc: set = set()
            target = set(block)
            while acc != target:
                nxt = next(it, None)
                if nxt is None or not set(nxt) <= target:
                    return False
                acc |= set(nxt)
        return next(it, None) is None

    def to_json(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data) -> "OrderedPartition":
        return cls.of(data["blocks"])


def all_ordered_partitions(k: int) -> list[OrderedPartition]:
    from .enumeration import ordered_partitions

    return [OrderedPartition.of(b) for b in ordered_partitions(range(1, k + 1))]


def partition_degeneracy(p: OrderedPartition, i: int) -> OrderedPartition:
    """Remove label i (dropping an emptied block) and shift larger labels down."""
    blocks = []
    for b in p.blocks:
        nb = tuple(a - 1 if a > i else a for a in b if a != i)
        if nb:
            blocks.append(nb)
    return OrderedPartition(tuple(blocks))


def ascending_word(op: int, k: int) -> Expression:
    return box(op, gens(*range(1, k + 1)))


def downset(n: int, x: Expression, milgram_only: bool = True) -> Poset:
    """All Y with Y -> X, inside the Milgram subposet unless ``milgram_only`` is off."""
    k = len(leaves(x))
    objs = enumerate_objects(n, k, milgram_only)
    tx = pair_table(x, n)
    tables = [pair_table(e, n) for e in objs]
    m = leq_matrix(tables + [tx])
    keep = [i for i in range(len(objs)) if m[i, len(objs)]]
    chosen = [objs[i] for i in keep]
    return Poset(chosen, m[np.ix_(keep, keep)], [render(e) for e in chosen])


@lru_cache(maxsize=16)
def permutohedron(k: int) -> Poset:
    return downset(2, ascending_word(2, k))


def partition_iso(k: int) -> dict:
    """Bijection from P_k to ordered partitions, checked to be an order isomorphism."""
    pk = permutohedron(k)
    mapping = {e: OrderedPartition.from_expression(e) for e in pk.elements}
    parts = all_ordered_partitions(k)
    if sorted(mapping.values(), key=lambda p: p.blocks) != sorted(parts, key=lambda p: p.blocks):
        raise AssertionError("P_k elements do not match the ordered set partitions")
    for a in pk.elements:
        for b in pk.elements:
            if pk.leq(a, b) != mapping[b].coarsens(mapping[a]):
                raise AssertionError(f"order mismatch at {render(a)}, {render(b)}")
    return mapping


def perm_action(sigma: Sequence[int], a: Expression) -> Expression:
    """Relabel by sigma (a -> sigma[a-1]) and sort every #2 block."""
    return OrderedPartition.from_expression(permute(a, sigma), sort_blocks=True).to_expression()


def top_blocks(a: Expression) -> tuple:
    """The #1-irreducible factors of ``a``."""
    return a.children if isinstance(a, Node) and a.op == 1 else (a,)


def pi_retract(a: Expression, b: Expression) -> Expression:
    """Project ``b`` onto the face of ``a``: restrict ``b`` to each #1 factor of ``a``."""
    return box(1, [restrict(b, leaves(part)) for part in top_blocks(a)])


def q_map(n: int, cells: Sequence[Expression]) -> Expression:
    """Collapse an (n-1)-tuple of permutohedron cells onto a Milgram object.

    B_1 = A_1 and B_i = pi_{A_1} ... pi_{A_{i-1}}(A_i); the #1-splits of B_l
    within a block of B_{l-1} become operation l, and the ascending #2 blocks
    of B_{n-1} become operation n.  Levels that do not split are skipped.
    """
    if len(cells) != n - 1:
        raise ExpressionError(f"q needs {n - 1} cells, got {len(cells)}")
    if n < 2:
        raise ExpressionError("q needs n >= 2")
    bs = q_intermediates(cells)
    labels = leaves(bs[0])
    block_seqs = [[leaves(p) for p in top_blocks(b)] for b in bs]

    def build(s: frozenset, level: int) -> Expression:
        if level == n:
            return box(n, gens(*sorted(s)))
        inside = [blk for blk in block_seqs[level - 1] if set(blk) & s]
        if any(not set(blk) <= s for blk in inside):
            raise AssertionError("retracted cells are not nested")
        if len(inside) == 1:
            return build(s, level + 1)
        return box(level, [build(frozenset(blk), level + 1) for blk in inside])

    return build(frozenset(labels), 1)


def q_intermediates(cells: Sequence[Expression]) -> list[Expression]:
    """The retracted tuple (B_1, ..., B_{n-1})."""
    out = []
    for i, c in enumerate(cells):
        x = c
        for a in reversed(list(cells[:i])):
            x = pi_retract(a, x)
        out.append(x)
    return out


@dataclass
class RetractionReport:
    k: int
    composition: int = 0   # pi_A pi_B = pi_{pi_A(B)}, checked over triples
    meets: int = 0         # faces meeting in S(C) give pi_A(B) = pi_B(A) = C
    equivariance: int = 0  # sigma pi_A(B) = pi_{sigma A}(sigma B)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def retraction_lemma(k: int) -> RetractionReport:
    """Exhaustively check the three retraction properties on P_k."""
    pk = permutohedron(k)
    elems = list(pk.elements)
    idx = {e: i for i, e in enumerate(elems)}
    m = pk.leq_matrix
    size = len(elems)
    pi = np.array([[idx[pi_retract(a, b)] for b in elems] for a in elems])
    rep = RetractionReport(k)

    for a in range(size):
        bad = pi[a][pi] != pi[pi[a]]   # bad[b, x]: pi_a(pi_b(x)) vs pi_{pi_a(b)}(x)
        rep.composition += size * size
        for b, x in zip(*np.nonzero(bad)):
            rep.failures.append(("composition", render(elems[a]), render(elems[b]), render(elems[x])))

    for a in range(size):
        for b in range(size):
            common = np.nonzero(m[:, a] & m[:, b])[0]
            tops = [c for c in common if m[common, c].all()]
            if not tops:
                continue
            c = tops[0]
            rep.meets += 1
            if not (pi[a, b] == pi[b, a] == c):
                rep.failures.append(("meet", render(elems[a]), render(elems[b])))

    for sigma in permutations(range(1, k + 1)):
        act = [idx[perm_action(sigma, e)] for e in elems]
        for a in range(size):
            for b in range(size):
                rep.equivariance += 1
                if act[pi[a, b]] != pi[act[a], act[b]]:
                    rep.failures.append(("equivariance", sigma, render(elems[a]), render(elems[b])))
    return rep
