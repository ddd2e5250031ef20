"""Chain complexes of nerves and their integer homology."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .graph_operads import gamma_simplices
from .poset import Poset


# ---------------------------------------------------------- Smith normal form

@dataclass
class SmithForm:
    rank: int
    factors: list[int]
    diagonal: list[list[int]] | None = None
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None


def _identity(m: int) -> list[list[int]]:
    return [[int(i == j) for j in range(m)] for i in range(m)]


def smith_normal_form(matrix: Sequence[Sequence[int]], transforms: bool = False) -> SmithForm:
    """Smith normal form over the integers.

    Returns the rank and the invariant factors d_1 | d_2 | ... (all nonzero
    diagonal entries, positive).  With ``transforms`` the unimodular U, V with
    U @ M @ V = D are returned as well.
    """
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            if U is not None:
                U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            if V is not None:
                for row in V:
                    row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        ra, rs = A[dst], A[src]
        for c in range(n):
            if rs[c]:
                ra[c] += q * rs[c]
        if U is not None:
            ua, us = U[dst], U[src]
            for c in range(m):
                if us[c]:
                    ua[c] += q * us[c]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            dirty = None
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t] and (dirty is None or abs(A[i][t]) < abs(A[dirty[0]][dirty[1]])):
                        dirty = (i, t)
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j] and (dirty is None or abs(A[t][j]) < abs(A[dirty[0]][dirty[1]])):
                        dirty = (t, j)
            if dirty is not None:
                swap_rows(t, dirty[0])
                swap_cols(t, dirty[1])
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    factors = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    result = SmithForm(len(factors), factors)
    if transforms:
        result.diagonal, result.U, result.V = A, U, V
    return result


def sparse_invariant_factors(columns: Sequence[dict], n_rows: int) -> tuple[int, list[int]]:
    """Rank and invariant factors of a sparse integer matrix.

    ``columns[c]`` maps row index to entry.  Unit pivots are eliminated
    first (a unimodular Schur complement step); whatever is left goes through
    the dense Smith normal form.
    """
    cols = {c: {r: v for r, v in col.items() if v} for c, col in enumerate(columns)}
    cols = {c: col for c, col in cols.items() if col}
    rows: dict[int, set] = defaultdict(set)
    for c, col in cols.items():
        for r in col:
            rows[r].add(c)
    pivots = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda c: len(cols[c])):
            col = cols.get(c)
            if not col:
                continue
            units = [r for r, v in col.items() if v in (1, -1)]
            if not units:
                continue
            r = min(units, key=lambda r: len(rows[r]))
            p = col[r]
            for c2 in list(rows[r]):
                if c2 == c:
                    continue
                other = cols[c2]
                f = other[r] * p
                for rr, v in col.items():
                    nv = other.get(rr, 0) - f * v
                    if nv:
                        if rr not in other:
                            rows[rr].add(c2)
                        other[rr] = nv
                    elif rr in other:
                        del other[rr]
                        rows[rr].discard(c2)
                if not other:
                    del cols[c2]
            for rr in col:
                rows[rr].discard(c)
            del cols[c]
            del rows[r]
            pivots += 1
            progress = True
    if not cols:
        return pivots, [1] * pivots
    live_rows = sorted({r for col in cols.values() for r in col})
    ridx = {r: i for i, r in enumerate(live_rows)}
    dense = [[0] * len(cols) for _ in live_rows]
    for j, c in enumerate(sorted(cols)):
        for r, v in cols[c].items():
            dense[ridx[r]][j] = v
    snf = smith_normal_form(dense)
    return pivots + snf.rank, [1] * pivots + snf.factors


# ------------------------------------------------------------- chain complexes

@dataclass
class ChainComplexData:
    """Graded bases with sparse integer boundary matrices.

    ``boundaries[d]`` lists, for each basis element of degree d, its
    boundary as ``{index in degree d-1: coefficient}``; ``boundaries[0]``
    is all zero.
    """

    bases: list[list]
    boundaries: list[list[dict]] = field(default_factory=list)

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def f_vector(self) -> list[int]:
        return [len(b) for b in self.bases]

    def matrix(self, d: int) -> list[list[int]]:
        """Dense matrix of the boundary map out of degree d."""
        rows = len(self.bases[d - 1]) if d >= 1 else 0
        out = [[0] * len(self.bases[d]) for _ in range(rows)]
        for j, col in enumerate(self.boundaries[d]):
            for i, v in col.items():
                out[i][j] = v
        return out

    def boundary_squares_to_zero(self) -> bool:
        for d in range(2, len(self.bases)):
            lower = self.boundaries[d - 1]
            for col in self.boundaries[d]:
                acc: dict = defaultdict(int)
                for i, v in col.items():
                    for r, w in lower[i].items():
                        acc[r] += v * w
                if any(acc.values()):
                    return False
        return True


@dataclass
class HomologyReport:
    f: list[int]
    betti: list[int]
    torsion: dict[int, list[int]]
    euler: int

    def to_json(self) -> dict:
        return {
            "f": self.f,
            "betti": self.betti,
            "torsion": [[d, fs] for d, fs in sorted(self.torsion.items())],
            "euler": self.euler,
        }


def homology(c: ChainComplexData) -> HomologyReport:
    if not c.boundary_squares_to_zero():
        raise ValueError("boundary maps do not square to zero")
    f = c.f_vector()
    ranks = [0] * (len(f) + 1)
    torsion = {}
    for d in range(1, len(f)):
        rank, factors = sparse_invariant_factors(c.boundaries[d], f[d - 1])
        ranks[d] = rank
        big = [x for x in factors if x > 1]
        if big:
            torsion[d - 1] = big
    betti = [f[d] - ranks[d] - ranks[d + 1] for d in range(len(f))]
    euler = sum((-1) ** d * x for d, x in enumerate(f))
    assert euler == sum((-1) ** d * b for d, b in enumerate(betti))
    return HomologyReport(f, betti, torsion, euler)


def order_complex(p: Poset) -> ChainComplexData:
    """Strictly increasing chains of ``p`` with the alternating-face boundary."""
    m = p.leq_matrix
    size = len(p)
    ups = [[j for j in range(size) if j != i and m[i, j]] for i in range(size)]
    chains: dict[int, list] = defaultdict(list)

    def walk(chain):
        chains[len(chain) - 1].append(tuple(chain))
        for j in ups[chain[-1]]:
            walk(chain + [j])

    for i in range(size):
        walk([i])
    # sort chains canonically: by the element order of p (itself sorted by key)
    bases = [sorted(chains[d]) for d in range(len(chains))]
    return _simplicial(bases, lambda s: True)


def _simplicial(bases, keep) -> ChainComplexData:
    index = [{s: i for i, s in enumerate(b)} for b in bases]
    boundaries = [[{} for _ in bases[0]]] if bases else []
    for d in range(1, len(bases)):
        cols = []
        for s in bases[d]:
            col: dict = {}
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                if not keep(face):
                    continue
                r = index[d - 1][face]
                col[r] = col.get(r, 0) + (-1) ** i
            cols.append({r: v for r, v in col.items() if v})
        boundaries.append(cols)
    return ChainComplexData(bases, boundaries)


def gamma_chain_complex(n: int, k: int) -> ChainComplexData:
    """Normalized chains of Gamma^(n)(k); degenerate faces are dropped."""
    graded = gamma_simplices(n, k)
    bases = [sorted(s.chain for s in graded[d]) for d in sorted(graded)]

    def nondegenerate(chain):
        return all(p != q for p, q in zip(chain, chain[1:]))

    return _simplicial(bases, nondegenerate)


def configuration_space_betti(k: int) -> list[int]:
    """Betti numbers of the ordered configuration space of k points in the plane.

    Coefficients of prod_{i=1}^{k-1} (1 + i t).
    """
    poly = [1]
    for i in range(1, k):
        nxt = poly + [0]
        for d, c in enumerate(poly):
            nxt[d + 1] += i * c
        poly = nxt
    return poly
