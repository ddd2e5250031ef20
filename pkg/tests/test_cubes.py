import itertools
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cube_oracle import grid_compatible_pairs
from iterated_monoidal import cubes
from iterated_monoidal.cubes import (
    Box,
    Configuration,
    clumps,
    configuration,
    cubes_compose,
    decomposable,
    g_compatible,
    in_F,
    in_G,
    permute_configuration,
    random_configuration,
    realize,
    shrink,
)
from iterated_monoidal.enumeration import enumerate_objects, operad_compose
from iterated_monoidal.expressions import ExpressionError, is_level_ordered, parse, permute
from iterated_monoidal.recipes import (
    G_EXPRESSION,
    G_LEFT,
    G_RIGHT,
    MILGRAM_LEFT,
    MILGRAM_RIGHT,
    NONDECOMPOSABLE_3D,
    PINWHEEL,
    f_intersection_law,
    shrink_law,
)
from strategies import objects

HALF = Q(1, 2)


def p(text, n=2):
    return parse(text, n)


# ----------------------------------------------------------------- boxes

def test_box_validation():
    with pytest.raises(ValueError):
        Box.of((0, 0))
    with pytest.raises(ValueError):
        Box.of((HALF, Q(3, 2)))


def test_overlapping_boxes_rejected():
    with pytest.raises(ValueError):
        configuration(2, {1: [(0, HALF), (0, 1)], 2: [(Q(1, 4), 1), (0, 1)]})


def test_touching_boxes_allowed():
    c = configuration(2, {1: [(0, HALF), (0, 1)], 2: [(HALF, 1), (0, 1)]})
    assert c.k == 2


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        Configuration(2, (1,), (Box.of((0, 1)),))


# --------------------------------------------------------------- realize

def test_realize_two():
    c = realize(p("1 #1 2"), 2)
    assert c.box(1) == Box.of((0, HALF), (0, 1))
    assert c.box(2) == Box.of((HALF, 1), (0, 1))


def test_realize_three():
    c = realize(p("(1 #2 2) #1 3"), 2)
    assert c.box(1) == Box.of((0, HALF), (0, HALF))
    assert c.box(2) == Box.of((0, HALF), (HALF, 1))
    assert c.box(3) == Box.of((HALF, 1), (0, 1))


@pytest.mark.parametrize("n, k", [(n, k) for n in (1, 2, 3) for k in (1, 2, 3, 4)])
def test_realize_lands_in_G(n, k):
    for a in enumerate_objects(n, k):
        c = realize(a, n)
        assert in_G(c, a)
        assert decomposable(c)


@pytest.mark.parametrize("n, k", [(2, 3), (3, 3), (2, 4)])
def test_realize_level_ordered_is_milgram(n, k):
    for a in enumerate_objects(n, k, milgram_only=True):
        assert is_level_ordered(a)
        assert decomposable(realize(a, n), "milgram")


def test_single_box_is_in_G():
    c = configuration(2, {1: [(Q(1, 3), HALF), (0, Q(1, 5))]})
    assert in_G(c, p("1"))


def test_label_mismatch():
    with pytest.raises(ExpressionError):
        in_G(realize(p("1 #1 2"), 2), p("1 #1 3"))


# ----------------------------------------------------------------------- F

def test_g_implies_f():
    for a in enumerate_objects(2, 3):
        assert in_F(realize(a, 2), a, 2)


def test_f_examples():
    c = realize(p("1 #1 2"), 2)
    assert in_F(c, p("1 #2 2"), 2)
    assert not in_F(c, p("2 #1 1"), 2)


def test_f_intersection_law():
    ok, count, failures = f_intersection_law(11, 60)
    assert ok and count == 60, failures[:3]


# -------------------------------------------------------- decomposability

def test_figure_configurations():
    assert not decomposable(configuration(3, NONDECOMPOSABLE_3D))
    assert not decomposable(configuration(2, PINWHEEL))
    right = configuration(2, MILGRAM_RIGHT)
    assert decomposable(right) and not decomposable(right, "milgram")
    assert decomposable(configuration(2, MILGRAM_LEFT), "milgram")


def test_g_figures():
    a = p(G_EXPRESSION)
    assert in_G(configuration(2, G_LEFT), a) and in_G(configuration(2, G_RIGHT), a)


def test_clumps_of_pinwheel():
    c = configuration(2, PINWHEEL)
    for axis in (1, 2):
        assert [sorted(g) for g in clumps(list(c.boxes), axis)] == [[0, 1, 2, 3]]
    strips = configuration(2, MILGRAM_LEFT)
    assert len(clumps(list(strips.boxes), 1)) >= 2


def test_unknown_mode():
    with pytest.raises(ValueError):
        decomposable(configuration(2, PINWHEEL), "diagonal")


# ------------------------------------------------------------------ shrink

def test_shrink_pinwheel():
    out = shrink(configuration(2, PINWHEEL))
    assert decomposable(out, "milgram")


def test_shrink_samples():
    ok, count, failures = shrink_law(1729, 500)
    assert ok and count == 500, failures[:3]


def test_shrink_tiny_is_identity():
    c = configuration(2, {1: [(0, Q(1, 100)), (0, Q(1, 100))], 2: [(Q(99, 100), 1), (Q(99, 100), 1)]})
    assert shrink(c) == c


def test_shrink_single_box():
    c = configuration(2, {1: [(0, 1), (0, 1)]})
    assert shrink(c) == c


def test_shrink_stays_in_G():
    for a in enumerate_objects(2, 3):
        assert in_G(shrink(realize(a, 2)), a)


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(2, 5))
def test_shrink_only_contracts(seed, n, k):
    c = random_configuration(random.Random(seed), n, k, max_side=Q(1, 4))
    out = shrink(c)
    for b, s in zip(c.boxes, out.boxes):
        assert b.barycenter() == s.barycenter()
        assert all(u <= z and w <= v for (u, v), (z, w) in zip(b.intervals, s.intervals))


# ---------------------------------------------------------- compatibility

def test_compatible_examples():
    a = p("1 #1 2")
    assert g_compatible(a, a, 2)[0]
    assert g_compatible(a, p("2 #1 1"), 2) == (False, None)
    ok, witness = g_compatible(a, p("2 #2 1"), 2)
    assert ok and in_G(witness, a) and in_G(witness, p("2 #2 1"))


@pytest.mark.parametrize("n, k", [(2, 3), (3, 2)])
def test_compatible_matches_grid_search(n, k):
    objs = enumerate_objects(n, k)
    brute = grid_compatible_pairs(objs, n, k)
    for (i, a), (j, b) in itertools.product(enumerate(objs), repeat=2):
        ok, witness = g_compatible(a, b, n)
        assert ok == ((i, j) in brute)
        if ok:
            assert in_G(witness, a) and in_G(witness, b)


# ------------------------------------------------------------------ operad

def test_compose_with_full_cubes():
    full = configuration(2, {1: [(0, 1), (0, 1)]})
    outer = realize(p("1 #1 2"), 2)
    assert cubes_compose(outer, [full, full]) == outer


@pytest.mark.parametrize("sizes", [(1, 2), (2, 1), (2, 2), (1, 3), (3, 1)])
def test_compose_realizations(sizes):
    for a in enumerate_objects(2, 2):
        for bs in itertools.product(*(enumerate_objects(2, m) for m in sizes)):
            c = cubes_compose(realize(a, 2), [realize(b, 2) for b in bs])
            assert in_G(c, operad_compose(a, list(bs)))


def test_compose_arity_mismatch():
    with pytest.raises(ValueError):
        cubes_compose(realize(p("1 #1 2"), 2), [realize(p("1"), 2)])


@given(objects(2, 3), st.permutations([1, 2, 3]))
def test_permutation_equivariance(a, sigma):
    assert in_G(permute_configuration(realize(a, 2), sigma), permute(a, sigma))


# ------------------------------------------------------------------- io

@given(st.integers(0, 10_000))
def test_json_roundtrip(seed):
    c = random_configuration(random.Random(seed), 2, 3)
    assert Configuration.from_json(c.to_json()) == c


def test_json_format():
    data = realize(p("1 #1 2"), 2).to_json()
    assert data == {
        "n": 2,
        "boxes": [
            {"label": 1, "intervals": [["0", "1/2"], ["0", "1"]]},
            {"label": 2, "intervals": [["1/2", "1"], ["0", "1"]]},
        ],
    }


def test_svg():
    svg = realize(p("1 #1 2"), 2).to_svg(100)
    assert svg.startswith("<svg") and svg.count("<rect") == 3 and ">2</text>" in svg
    with pytest.raises(ValueError):
        realize(p("1 #1 2", 3), 3).to_svg()


def test_describe():
    assert cubes.describe(realize(p("1 #1 2"), 2)) == "1: [0,1/2] x [0,1]; 2: [1/2,1] x [0,1]"
