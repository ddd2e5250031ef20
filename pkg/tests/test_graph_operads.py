import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iterated_monoidal.coherence import hom_exists
from iterated_monoidal.enumeration import build_poset, enumerate_objects, operad_compose
from iterated_monoidal.expressions import ExpressionError, PairTable, from_pair_table, pair_table, parse, permute
from iterated_monoidal.graph_operads import (
    GammaSimplex,
    forget,
    forget_and_map,
    gamma_compose,
    gamma_member,
    gamma_restrict,
    gamma_simplices,
    k_compose,
    k_enumerate,
    k_leq,
    k_relabel,
    pair_flips,
)
from strategies import objects

WALK = ((1, 2, 3), (2, 1, 3), (2, 3, 1), (2, 1, 3))


# ------------------------------------------------------------ complete graph

def test_k_sizes_and_realizable_part():
    ks = k_enumerate(2, 3)
    assert len(ks) == 48
    assert sum(from_pair_table(t) is not None for t in ks) == 36


def test_k_leq_is_a_partial_order():
    ks = k_enumerate(2, 3)
    for x in ks:
        assert k_leq(x, x)
    for x, y in itertools.product(ks, repeat=2):
        if x != y and k_leq(x, y):
            assert not k_leq(y, x)
    for x, y in itertools.product(ks, repeat=2):
        if k_leq(x, y):
            for z in ks:
                if k_leq(y, z):
                    assert k_leq(x, z)


def test_k_leq_rejects_mixed_bounds():
    with pytest.raises(ExpressionError):
        k_leq(PairTable(2, (1, 2), (1,)), PairTable(3, (1, 2), (1,)))


def test_embedding_is_full_on_order():
    objs = enumerate_objects(2, 3)
    tables = {e: pair_table(e, 2) for e in objs}
    for a, b in itertools.product(objs, repeat=2):
        assert k_leq(tables[a], tables[b]) == hom_exists(a, b)


def test_unrealizable_table_sits_in_k():
    # pairs {1,2} and {2,3} coloured 1 but {1,3} coloured 2 is not an object
    t = PairTable(2, (1, 2, 3), (1, 2, 1))
    assert from_pair_table(t) is None
    assert t in k_enumerate(2, 3)


@given(objects(2, 2), objects(2, 2), objects(2, 1))
def test_k_compose_matches_expression_compose(a, b, c):
    out = k_compose(pair_table(a, 2), [pair_table(b, 2), pair_table(c, 2)])
    assert out == pair_table(operad_compose(a, [b, c]), 2)


def test_k_compose_with_singletons():
    unit = PairTable(2, (1,), ())
    for x in k_enumerate(2, 3):
        assert k_compose(x, [unit] * 3) == x
        assert k_compose(unit, [x]) == x


def test_k_compose_arity_mismatch():
    with pytest.raises(ExpressionError):
        k_compose(PairTable(2, (1, 2), (1,)), [PairTable(2, (1,), ())])


@given(st.permutations([1, 2, 3]), objects(2, 3))
def test_relabel_matches_expression_action(sigma, e):
    assert k_relabel(pair_table(e, 2), sigma) == pair_table(permute(e, sigma), 2)


def test_forget_is_the_orientation():
    t = pair_table(parse("(2 #2 3) #1 1", 2), 2)
    assert forget(t) == (2, 3, 1)


# ---------------------------------------------------------------------- Gamma

def test_walk_membership():
    s = GammaSimplex(WALK)
    assert s.dim == 3
    assert pair_flips(s) == {(1, 2): 1, (1, 3): 2, (2, 3): 0}
    assert gamma_member(s, 3)
    assert not gamma_member(s, 2)


def test_simplex_validation():
    with pytest.raises(ValueError):
        GammaSimplex(())
    with pytest.raises(ValueError):
        GammaSimplex(((1, 2), (1, 3)))


def test_faces_and_degeneracy():
    s = GammaSimplex(WALK)
    assert s.face(1).chain == ((1, 2, 3), (2, 3, 1), (2, 1, 3))
    assert not s.is_degenerate()
    assert GammaSimplex(((1, 2), (1, 2))).is_degenerate()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gamma_two_is_a_sphere_skeleton(n):
    # two vertices, two nondegenerate simplices in each dimension 1..n-1
    graded = gamma_simplices(n, 2)
    assert [len(graded[d]) for d in sorted(graded)] == [2] * n


def test_gamma_one_is_discrete():
    graded = gamma_simplices(1, 3)
    assert list(graded) == [0] and len(graded[0]) == 6


def test_gamma_two_three_dimension():
    graded = gamma_simplices(2, 3)
    assert max(graded) == 3
    assert all(gamma_member(s, 2) for d in graded for s in graded[d])


def test_gamma_simplices_are_exactly_the_members():
    got = {s.chain for ss in gamma_simplices(2, 3).values() for s in ss}
    perms = list(itertools.permutations((1, 2, 3)))
    brute = set()
    for length in range(1, 6):
        for chain in itertools.product(perms, repeat=length):
            s = GammaSimplex(chain)
            if not s.is_degenerate() and gamma_member(s, 2):
                brute.add(chain)
    assert got == brute


@given(st.lists(st.permutations([1, 2, 3, 4]), min_size=1, max_size=5).map(lambda c: GammaSimplex(tuple(map(tuple, c)))))
def test_membership_is_pairwise(s):
    for n in (1, 2, 3):
        by_pairs = all(gamma_member(gamma_restrict(s, a, b), n) for a, b in itertools.combinations(range(1, 5), 2))
        assert gamma_member(s, n) == by_pairs


def test_restrict_orientation():
    s = GammaSimplex(((3, 1, 2),))
    assert gamma_restrict(s, 1, 3).chain == ((2, 1),)
    assert gamma_restrict(s, 3, 1).chain == ((2, 1),)


def test_gamma_json_roundtrip():
    s = GammaSimplex(WALK)
    assert GammaSimplex.from_json(s.to_json()) == s
    with pytest.raises(ValueError):
        GammaSimplex.from_json({"k": 4, "chain": [[1, 2, 3]]})


def test_gamma_compose():
    outer = GammaSimplex(((1, 2), (2, 1)))
    inner = GammaSimplex(((1, 2), (2, 1)))
    unit = GammaSimplex(((1,), (1,)))
    assert gamma_compose(outer, [inner, unit]).chain == ((1, 2, 3), (3, 2, 1))
    with pytest.raises(ValueError):
        gamma_compose(outer, [inner])
    with pytest.raises(ValueError):
        gamma_compose(outer, [inner, GammaSimplex(((1,),))])


def test_gamma_compose_respects_filtration():
    for d in (0, 1):
        outers = [s for s in gamma_simplices(2, 2)[d]]
        inners = [s for s in gamma_simplices(2, 2)[d]]
        for o, a, b in itertools.product(outers, inners, inners):
            assert gamma_member(gamma_compose(o, [a, b]), 2)


# ----------------------------------------------------------- forgetful map

def test_forget_and_map_example():
    chain = [parse(t, 2) for t in ("2 #1 1", "1 #2 2")]
    assert forget_and_map(chain).chain == ((2, 1), (1, 2))


@pytest.mark.parametrize("n", [2, 3])
def test_chains_land_in_gamma(n):
    p = build_poset(n, 3)
    for chain in p.maximal_chains():
        s = forget_and_map([p.elements[i] for i in chain])
        assert gamma_member(s, n)
