"""Named recipes that recompute the reference worked examples.

Each recipe returns ``(ok, detail)``; ``detail`` is the observed value as a
short deterministic string.  ``run_recipes`` drives them all.
"""

from __future__ import annotations

import contextlib
import io
from fractions import Fraction
from typing import Callable

from . import cubes
from .coherence import hom_exists, one_step_rewrites, reachability_witness, table_leq
from .enumeration import build_poset, closed_form_shapes, enumerate_objects, ratio_limit, shape_recurrence
from .expressions import Gen, Node, is_level_ordered, pair_table, parse, render, restrict
from .graph_operads import GammaSimplex, forget_and_map, gamma_member, gamma_simplices
from .milgram import OrderedPartition, downset, perm_action, permutohedron, pi_retract, q_intermediates, q_map
from .topology import gamma_chain_complex, homology, order_complex

RECIPES: dict[str, Callable[[], tuple[bool, str]]] = {}


def recipe(name: str):
    def register(fn):
        RECIPES[name] = fn
        return fn

    return register


MORPHISM_SOURCE = "(2 #2 3) #1 1"
MORPHISM_TARGET = "2 #2 1 #2 3"
NON_TARGET = "1 #2 3 #2 2"

Q_CELLS = ("(1 #2 3) #1 (2 #2 4 #2 5)", "(1 #2 3 #2 4) #1 (2 #2 5)", "3 #1 (1 #2 2 #2 4 #2 5)")
Q_CELLS_AS_PRINTED = Q_CELLS[:2] + ("(1 #2 2 #2 4 #2 5) #1 3",)
Q_INTERMEDIATES = ("(1 #2 3) #1 (2 #2 4 #2 5)", "(1 #2 3) #1 4 #1 (2 #2 5)", "3 #1 1 #1 4 #1 (2 #2 5)")
Q_OUTPUT = "(3 #3 1) #1 (4 #2 (2 #4 5))"

_H, _Q, _T = Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)

NONDECOMPOSABLE_3D = {1: [(0, _H), (0, 1), (0, _H)], 2: [(0, 1), (0, _H), (_H, 1)], 3: [(_H, 1), (_H, 1), (0, 1)]}
PINWHEEL = {1: [(0, _T), (0, _Q)], 2: [(_T, 1), (0, _T)], 3: [(0, _Q), (_Q, 1)], 4: [(_Q, 1), (_T, 1)]}
MILGRAM_RIGHT = {1: [(0, _H), (_H, 1)], 2: [(0, 1), (0, _H)], 3: [(_H, 1), (_H, 1)]}
MILGRAM_LEFT = {
    3: [(0, _Q), (0, _Q)], 6: [(0, _Q), (_Q, _T)], 1: [(0, _Q), (_T, 1)],
    2: [(_Q, _T), (0, _H)], 4: [(_T, 1), (0, _T)], 5: [(_T, 1), (_T, 1)],
}
G_LEFT = {1: [(0, _H), (0, _H)], 2: [(0, _H), (_H, 1)], 3: [(_H, 1), (0, _Q)], 4: [(_H, 1), (_Q, 1)]}
G_RIGHT = {1: [(0, _H), (0, _Q)], 2: [(0, _H), (_Q, 1)], 3: [(_H, 1), (0, _H)], 4: [(_H, 1), (_H, 1)]}
G_EXPRESSION = "(1 #2 2) #1 (3 #2 4)"


# ---------------------------------------------------------------- expressions

@recipe("parse-morphism-example")
def _parse_example():
    e = parse(MORPHISM_SOURCE, 2)
    want = Node(1, (Node(2, (Gen(2), Gen(3))), Gen(1)))
    return e == want and render(want) == MORPHISM_SOURCE, render(e)


@recipe("restrict-morphism-example")
def _restrict_example():
    e = parse(MORPHISM_SOURCE, 2)
    got = (render(restrict(e, {1, 2})), render(restrict(e, {2, 3})))
    return got == ("2 #1 1", "2 #2 3"), " | ".join(got)


@recipe("pair-table-morphism-example")
def _table_example():
    t = pair_table(parse(MORPHISM_SOURCE, 2))
    got = {(2, 3): t.rel(2, 3), (1, 2): t.rel(1, 2), (1, 3): t.rel(1, 3)}
    want = {(2, 3): (2, 2), (1, 2): (1, 2), (1, 3): (1, 3)}
    return got == want, "; ".join(f"{a}{b}:op{o} first {f}" for (a, b), (o, f) in sorted(got.items()))


@recipe("level-ordered-shape")
def _level_ordered():
    ok = is_level_ordered(parse("(1 #2 2) #1 3", 2))
    return ok, str(ok)


# ------------------------------------------------------------------ coherence

@recipe("morphism-example")
def _morphism():
    a, b, c = (parse(s, 2) for s in (MORPHISM_SOURCE, MORPHISM_TARGET, NON_TARGET))
    yes, no = hom_exists(a, b), hom_exists(a, c)
    tables = table_leq(pair_table(a, 2), pair_table(b, 2))
    return yes and not no and tables, f"{'yes' if yes else 'no'} / {'yes' if no else 'no'}"


@recipe("octahedron-rewrites")
def _octahedron_rewrites():
    got = sorted(render(t) for _, t in one_step_rewrites(parse("2 #1 1", 3), 3))
    return got == ["1 #2 2", "1 #3 2", "2 #2 1", "2 #3 1"], ", ".join(got)


@recipe("full-interchange")
def _full_interchange():
    got = {render(t) for _, t in one_step_rewrites(parse(G_EXPRESSION, 2), 2)}
    want = "(1 #1 3) #2 (2 #1 4)"
    return want in got, want if want in got else "missing"


@recipe("octahedron-edge-witness")
def _edge_witness():
    chain = reachability_witness(parse("2 #1 1", 2), parse("1 #2 2", 2), 2)
    if chain is None or len(chain) != 1:
        return False, "no single step"
    step = chain[0][0]
    splits = tuple(render(s) for s in (step.x, step.y, step.z, step.w))
    return (step.i, step.j, splits) == (1, 2, ("0", "2", "1", "0")), f"i={step.i} j={step.j} xyzw={splits}"


@recipe("square-covers")
def _square_covers():
    p = build_poset(2, 2)
    got = sorted(render(e) for e in p.upper_covers(parse("1 #1 2", 2)))
    return got == ["1 #2 2", "2 #2 1"], ", ".join(got)


# ---------------------------------------------------------------- enumeration

@recipe("octahedron-size")
def _octahedron_size():
    sizes = [len(enumerate_objects(n, 2)) for n in range(1, 6)]
    return sizes == [2 * n for n in range(1, 6)], str(sizes)


@recipe("shape-closed-forms")
def _closed_forms():
    bad = []
    for n in (2, 3, 4):
        rec = shape_recurrence(n, 4)
        for k in (2, 3, 4):
            if rec[k] != closed_form_shapes(n, k):
                bad.append((n, k))
    a34 = shape_recurrence(3, 4)[4]
    return not bad and a34 == 93, f"a^3_4={a34}" + (f" mismatches {bad}" if bad else "")


@recipe("shape-ratio-limit")
def _ratio():
    a = shape_recurrence(2, 12)
    r = a[12] / a[11]
    lim = ratio_limit(2)
    increasing = all(a[k + 1] / a[k] > a[k] / a[k - 1] for k in range(2, 12))
    return increasing and r < lim, f"a12/a11={r:.4f} < {lim:.4f}"


@recipe("octahedron-poset")
def _octahedron_poset():
    p = build_poset(3, 2)
    chains = p.maximal_chains()
    covers, rels = len(p.cover_edges()), len(p.relation_edges())
    ok = len(p) == 6 and covers == 8 and rels == 12 and len(chains) == 8 and all(len(c) == 3 for c in chains)
    return ok, f"{len(p)} elements, {rels} morphisms, {covers} covers, {len(chains)} maximal chains"


# the twelve labelled arrows of the M_3(2) figure: source, target, i, j, x y z w
OCTAHEDRON_ARROWS = (
    ("2 #1 1", "2 #2 1", 1, 2, "2001"), ("2 #1 1", "1 #2 2", 1, 2, "0210"),
    ("2 #1 1", "1 #3 2", 1, 3, "0210"), ("2 #1 1", "2 #3 1", 1, 3, "2001"),
    ("1 #1 2", "2 #2 1", 1, 2, "0120"), ("1 #1 2", "1 #2 2", 1, 2, "1002"),
    ("1 #1 2", "1 #3 2", 1, 3, "1002"), ("1 #1 2", "2 #3 1", 1, 3, "0120"),
    ("2 #2 1", "1 #3 2", 2, 3, "0210"), ("2 #2 1", "2 #3 1", 2, 3, "2001"),
    ("1 #2 2", "1 #3 2", 2, 3, "1002"), ("1 #2 2", "2 #3 1", 2, 3, "0120"),
)


def octahedron_arrows(n: int = 3) -> list[tuple]:
    """Every morphism of M_n(2) as a single labelled interchange step."""
    objs = enumerate_objects(n, 2)
    out = []
    for a in objs:
        for b in objs:
            if a == b or not hom_exists(a, b):
                continue
            chain = reachability_witness(a, b, n)
            if chain is None or len(chain) != 1:
                raise AssertionError(f"{render(a)} -> {render(b)} is not a single interchange")
            st = chain[0][0]
            label = "".join(render(t) for t in (st.x, st.y, st.z, st.w))
            out.append((render(a), render(b), st.i, st.j, label))
    return sorted(out)


@recipe("octahedron-edge-set")
def _octahedron_edges():
    got = octahedron_arrows(3)
    return got == sorted(OCTAHEDRON_ARROWS), f"{len(got)} labelled arrows"


@recipe("square-poset")
def _square():
    p = build_poset(2, 2)
    edges = p.cover_edges()
    deg = sorted(sum(i in e for e in edges) for i in range(len(p)))
    return len(p) == 4 and len(edges) == 4 and deg == [2, 2, 2, 2], f"{len(p)} elements, {len(edges)} covers"


# ---------------------------------------------------------------- graph operads

@recipe("gamma-membership")
def _gamma():
    s = GammaSimplex(((1, 2, 3), (2, 1, 3), (2, 3, 1), (2, 1, 3)))
    a, b = gamma_member(s, 3), gamma_member(s, 2)
    return a and not b, f"n=3 {a}, n=2 {b}"


@recipe("gamma-two-skeleton")
def _gamma2():
    ok = True
    for n in (1, 2, 3, 4):
        g = gamma_simplices(n, 2)
        ok &= sorted(g) == list(range(n)) and all(len(v) == 2 for v in g.values())
    return ok, "2 simplices in each dimension 0..n-1"


@recipe("octahedron-edge-to-gamma")
def _edge_to_gamma():
    s = forget_and_map([parse("1 #1 2", 2), parse("2 #2 1", 2)])
    ok = s.chain == ((1, 2), (2, 1)) and not s.is_degenerate() and gamma_member(s, 2)
    return ok, str(s.chain)


# ------------------------------------------------------------------ topology

@recipe("octahedron-f-vector")
def _fvec():
    f = order_complex(build_poset(3, 2)).f_vector()
    return f == [6, 12, 8], str(f)


@recipe("gamma-circle")
def _circle():
    h = homology(gamma_chain_complex(2, 2))
    return h.f == [2, 2] and h.betti == [1, 1], f"f={h.f} betti={h.betti}"


@recipe("octahedron-spheres")
def _spheres():
    out = []
    ok = True
    for n in range(2, 6):
        h = homology(order_complex(build_poset(n, 2)))
        want = [1] + [0] * (n - 2) + [1]
        ok &= h.betti == want and not h.torsion
        out.append(str(h.betti))
    return ok, " ".join(out)


@recipe("permutohedron-contractible")
def _disk():
    h = homology(order_complex(downset(2, parse("1 #2 2 #2 3", 2))))
    return h.betti == [1, 0, 0] and not h.torsion, str(h.betti)


# ------------------------------------------------------------------ milgram

@recipe("hexagon-size")
def _hexagon():
    m = len(permutohedron(3))
    return m == 13, str(m)


@recipe("hexagon-vertex")
def _vertex():
    p = OrderedPartition.from_expression(parse("(1 #2 2) #1 3", 2))
    return p.blocks == ((1, 2), (3,)), str(p.blocks)


@recipe("order-reversal-action")
def _reversal():
    got = render(perm_action([6, 5, 4, 3, 2, 1], parse("(2 #2 4) #1 (3 #2 5 #2 6) #1 1", 2)))
    return got == "(3 #2 5) #1 (1 #2 2 #2 4) #1 6", got


@recipe("retraction-example")
def _retraction():
    got = render(pi_retract(parse(Q_CELLS[0], 2), parse(Q_CELLS[1], 2)))
    return got == Q_INTERMEDIATES[1], got


@recipe("retraction-composition")
def _retraction_law():
    pk = permutohedron(3).elements
    bad = 0
    for a in pk:
        for b in pk:
            for x in pk:
                if pi_retract(a, pi_retract(b, x)) != pi_retract(pi_retract(a, b), x):
                    bad += 1
    return bad == 0, f"{len(pk) ** 3 - bad}/{len(pk) ** 3} triples"


@recipe("q-map-example")
def _q():
    cells = [parse(s, 2) for s in Q_CELLS]
    mids = tuple(render(b) for b in q_intermediates(cells))
    out = render(q_map(4, cells))
    return mids == Q_INTERMEDIATES and out == Q_OUTPUT, out


# -------------------------------------------------------------------- cubes

@recipe("cubes-g-figures")
def _g_figures():
    a = parse(G_EXPRESSION, 2)
    left = cubes.configuration(2, G_LEFT)
    right = cubes.configuration(2, G_RIGHT)
    ok = cubes.in_G(left, a) and cubes.in_G(right, a)
    return ok, f"left {cubes.in_G(left, a)}, right {cubes.in_G(right, a)}"


@recipe("cubes-nondecomposable-3d")
def _nd3():
    d = cubes.decomposable(cubes.configuration(3, NONDECOMPOSABLE_3D))
    return not d, f"plain {d}"


@recipe("cubes-pinwheel")
def _pinwheel():
    d = cubes.decomposable(cubes.configuration(2, PINWHEEL))
    return not d, f"plain {d}"


@recipe("cubes-milgram-figures")
def _milgram_figs():
    right = cubes.configuration(2, MILGRAM_RIGHT)
    left = cubes.configuration(2, MILGRAM_LEFT)
    rp, rm = cubes.decomposable(right), cubes.decomposable(right, "milgram")
    lm = cubes.decomposable(left, "milgram")
    return rp and not rm and lm, f"right plain {rp} milgram {rm}; left milgram {lm}"


@recipe("cubes-contradiction")
def _contradiction():
    ok, w = cubes.g_compatible(parse("1 #1 2", 2), parse("2 #1 1", 2), 2)
    return not ok and w is None, str(ok)


@recipe("cubes-operad-map")
def _cubes_operad():
    from itertools import product
    from .enumeration import operad_compose

    bad = checked = 0
    objs = {m: enumerate_objects(2, m) for m in (1, 2, 3)}
    for k in (1, 2):
        for outer in objs[k]:
            for sizes in product((1, 2, 3), repeat=k):
                if sum(sizes) > 4:
                    continue
                for inners in product(*(objs[m] for m in sizes)):
                    c = cubes.cubes_compose(cubes.realize(outer, 2), [cubes.realize(x, 2) for x in inners])
                    checked += 1
                    bad += not cubes.in_G(c, operad_compose(outer, list(inners)))
    return bad == 0, f"{checked - bad}/{checked} compositions"


@recipe("cubes-equivariance")
def _cubes_equivariance():
    from itertools import permutations
    from .expressions import permute

    bad = checked = 0
    for a in enumerate_objects(2, 3):
        for sigma in permutations((1, 2, 3)):
            checked += 1
            bad += not cubes.in_G(cubes.permute_configuration(cubes.realize(a, 2), sigma), permute(a, sigma))
    return bad == 0, f"{checked - bad}/{checked}"


@recipe("cubes-intersection-law")
def _intersection():
    from .config import SAMPLING

    res = f_intersection_law(SAMPLING.seed, SAMPLING.samples)
    return res[0], f"{res[1]} samples"


def f_intersection_law(seed: int, samples: int, n: int = 2, k: int = 3) -> tuple[bool, int, list]:
    """Check F(A) ∩ F(B) = ∪_{X<=A,B} G(X) pointwise on seeded random configurations.

    Returns (all ok, samples checked, failing descriptions).
    """
    import random

    import numpy as np

    from .coherence import leq_matrix

    objs = list(enumerate_objects(n, k))
    leq = leq_matrix([pair_table(e, n) for e in objs])   # leq[x, a]: x -> a
    rng = random.Random(seed)
    failures = []
    for s in range(samples):
        c = cubes.random_configuration(rng, n, k)
        g = np.array([cubes.in_G(c, x) for x in objs])
        f = (leq & g[:, None]).any(axis=0)
        if s < 10:  # the vectorized F agrees with the direct scan
            for a_idx, a in enumerate(objs):
                if cubes.in_F(c, a, n) != bool(f[a_idx]):
                    failures.append(f"in_F disagrees at sample {s}")
        both = f[:, None] & f[None, :]
        common = np.einsum("x,xa,xb->ab", g.astype(np.int64), leq.astype(np.int64), leq.astype(np.int64)) > 0
        if not np.array_equal(both, common):
            failures.append(f"sample {s}: {cubes.describe(c)}")
    return not failures, samples, failures


def shrink_law(seed: int, samples: int, dims=(1, 2, 3), sizes=(2, 3, 4, 5)) -> tuple[bool, int, list]:
    """Shrink seeded random configurations and check each result is Milgram decomposable.

    Dimension and arity cycle through ``dims`` and ``sizes``.  Returns
    (all ok, samples checked, failing descriptions).
    """
    import random

    rng = random.Random(seed)
    failures = []
    for s in range(samples):
        n, k = dims[s % len(dims)], sizes[(s // len(dims)) % len(sizes)]
        c = cubes.random_configuration(rng, n, k, max_side=Fraction(1, 4) if n == 1 else Fraction(1, 2))
        out = cubes.shrink(c)
        if not cubes.decomposable(out, "milgram"):
            failures.append(f"sample {s}: {cubes.describe(c)}")
    return not failures, samples, failures


# ----------------------------------------------------------------------- cli

def _cli(argv):
    from .cli import main

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


@recipe("cli-hom-yes")
def _cli_yes():
    code, out = _cli(["hom", "--n", "2", MORPHISM_SOURCE, MORPHISM_TARGET])
    return code == 0 and out.strip() == "yes", out.strip()


@recipe("cli-hom-no")
def _cli_no():
    code, out = _cli(["hom", "--n", "2", MORPHISM_SOURCE, NON_TARGET])
    return code == 0 and out.strip() == "no", out.strip()


@recipe("cli-counts")
def _cli_counts():
    code, out = _cli(["counts", "--n", "2", "--kmax", "4"])
    last = out.strip().splitlines()[-1]
    return code == 0 and last.split(",")[:3] == ["4", "22", "528"], last


@recipe("cli-export-hasse")
def _cli_hasse():
    code, out = _cli(["export", "hasse", "--n", "3", "--k", "2", "--edges", "relations"])
    nodes = sum(1 for line in out.splitlines() if "[label=" in line)
    edges = sum(1 for line in out.splitlines() if "->" in line)
    return code == 0 and (nodes, edges) == (6, 12), f"{nodes} nodes, {edges} edges"


@recipe("cli-export-qmap")
def _cli_qmap():
    code, out = _cli(["export", "qmap", "--n", "4", "--k", "5", "--cells", *Q_CELLS])
    return code == 0 and out.strip() == Q_OUTPUT, out.strip()


def run_recipes(names=None) -> list[tuple[str, bool, str]]:
    out = []
    for name in names or sorted(RECIPES):
        try:
            ok, detail = RECIPES[name]()
        except Exception as exc:  # a crashing recipe is a failed recipe
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
