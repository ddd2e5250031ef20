import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iterated_monoidal.coherence import hom_exists
from iterated_monoidal.enumeration import degeneracy, enumerate_objects
from iterated_monoidal.expressions import ExpressionError, Gen, is_level_ordered, parse, render
from iterated_monoidal.milgram import (
    OrderedPartition,
    all_ordered_partitions,
    ascending_word,
    downset,
    partition_degeneracy,
    partition_iso,
    perm_action,
    permutohedron,
    pi_retract,
    q_intermediates,
    q_map,
    retraction_lemma,
)
from iterated_monoidal.recipes import Q_CELLS, Q_CELLS_AS_PRINTED, Q_INTERMEDIATES, Q_OUTPUT


def p(text):
    return parse(text, 2)


# -------------------------------------------------------------- downsets

@pytest.mark.parametrize("k, size", [(1, 1), (2, 3), (3, 13), (4, 75), (5, 541)])
def test_permutohedron_sizes(k, size):
    assert len(permutohedron(k)) == size


def test_downset_of_a_generator():
    assert [render(e) for e in downset(3, Gen(1)).elements] == ["1"]


def test_full_downset_is_larger():
    assert len(downset(2, ascending_word(2, 3), milgram_only=False)) == 17


def test_downset_contains_its_top():
    x = p("(1 #2 3) #1 2")
    d = downset(2, x)
    assert x in d and d.maximal() == [x]
    assert all(hom_exists(y, x) for y in d.elements)


# ------------------------------------------------------ ordered partitions

def test_vertex_example():
    assert OrderedPartition.from_expression(p("(1 #2 2) #1 3")).blocks == ((1, 2), (3,))


def test_top_is_single_block():
    assert OrderedPartition.from_expression(ascending_word(2, 4)).blocks == ((1, 2, 3, 4),)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_partition_iso(k):
    mapping = partition_iso(k)
    assert len(mapping) == len(all_ordered_partitions(k))


def test_face_counts():
    counts = [0] * 5
    for e, part in partition_iso(4).items():
        counts[4 - len(part.blocks)] += 1
    assert counts[:4] == [24, 36, 14, 1]


def test_partition_validation():
    with pytest.raises(ValueError):
        OrderedPartition(((1, 2), (2,)))
    with pytest.raises(ValueError):
        OrderedPartition(((1,), ()))
    with pytest.raises(ExpressionError):
        OrderedPartition.from_expression(p("2 #2 1"))
    with pytest.raises(ExpressionError):
        OrderedPartition.from_expression(p("(1 #1 2) #2 3"))


def test_coarsening():
    fine = OrderedPartition.of([[1], [3], [2]])
    assert OrderedPartition.of([[1, 3], [2]]).coarsens(fine)
    assert not OrderedPartition.of([[1, 2], [3]]).coarsens(fine)
    assert fine.coarsens(fine)


def test_partition_json():
    part = OrderedPartition.of([[3], [1, 2]])
    assert part.to_json() == {"blocks": [[3], [1, 2]]}
    assert OrderedPartition.from_json(part.to_json()) == part


# ---------------------------------------------------------------- action

def test_reversal_example():
    got = perm_action([6, 5, 4, 3, 2, 1], p("(2 #2 4) #1 (3 #2 5 #2 6) #1 1"))
    assert render(got) == "(3 #2 5) #1 (1 #2 2 #2 4) #1 6"


@pytest.mark.parametrize("k", [3, 4])
def test_action_is_an_order_preserving_group_action(k):
    pk = permutohedron(k)
    perms = list(itertools.permutations(range(1, k + 1)))
    ident = tuple(range(1, k + 1))
    for e in pk.elements:
        assert perm_action(ident, e) == e
    for s, t in itertools.product(perms, repeat=2):
        st_ = [s[t[a] - 1] for a in range(k)]
        for e in pk.elements:
            assert perm_action(s, perm_action(t, e)) == perm_action(st_, e)
    for s in perms:
        for a, b in itertools.product(pk.elements, repeat=2):
            if pk.leq(a, b):
                assert pk.leq(perm_action(s, a), perm_action(s, b))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_action_is_free_on_vertices(k):
    vertices = [e for e, part in partition_iso(k).items() if len(part.blocks) == k]
    assert len(vertices) == math.factorial(k)
    orbit = {perm_action(s, vertices[0]) for s in itertools.permutations(range(1, k + 1))}
    assert orbit == set(vertices)


@pytest.mark.parametrize("k", [3, 4])
def test_stabilisers_are_young_subgroups(k):
    # a face with block sizes (j_1, ..., j_s) is fixed exactly by the permutations preserving each block
    for e, part in partition_iso(k).items():
        fixed = sum(perm_action(s, e) == e for s in itertools.permutations(range(1, k + 1)))
        assert fixed == math.prod(math.factorial(len(b)) for b in part.blocks)


# ------------------------------------------------------------ retractions

def test_retraction_example():
    assert render(pi_retract(p(Q_CELLS[0]), p(Q_CELLS[1]))) == Q_INTERMEDIATES[1]


@given(st.sampled_from(permutohedron(4).elements))
def test_retraction_is_idempotent(a):
    assert pi_retract(a, a) == a


@given(st.sampled_from(permutohedron(4).elements), st.sampled_from(permutohedron(4).elements))
def test_retraction_lands_in_the_face(a, b):
    assert hom_exists(pi_retract(a, b), a)


@pytest.mark.parametrize("k, triples", [(2, 27), (3, 2197), (4, 421875)])
def test_retraction_lemma(k, triples):
    rep = retraction_lemma(k)
    assert rep.ok, rep.failures[:5]
    assert rep.composition == triples
    assert rep.equivariance == math.factorial(k) * len(permutohedron(k)) ** 2


# ------------------------------------------------------------ degeneracies

@pytest.mark.parametrize("k", [2, 3, 4])
def test_degeneracy_square(k):
    lower = set(permutohedron(k - 1).elements)
    for e in permutohedron(k).elements:
        for i in range(1, k + 1):
            d = degeneracy(e, i)
            assert d in lower
            assert OrderedPartition.from_expression(d) == partition_degeneracy(OrderedPartition.from_expression(e), i)


# ------------------------------------------------------------------ q-map

def test_q_example():
    cells = [p(s) for s in Q_CELLS]
    assert tuple(render(b) for b in q_intermediates(cells)) == Q_INTERMEDIATES
    assert render(q_map(4, cells)) == Q_OUTPUT


def test_q_with_printed_cells():
    assert render(q_map(4, [p(s) for s in Q_CELLS_AS_PRINTED])) == "(1 #3 3) #1 (4 #2 (2 #4 5))"


@pytest.mark.parametrize("n, k", [(2, 3), (3, 4), (4, 2)])
def test_q_on_top_cells(n, k):
    top = ascending_word(2, k)
    assert q_map(n, [top] * (n - 1)) == ascending_word(n, k)


def test_q_arity_errors():
    with pytest.raises(ExpressionError):
        q_map(3, [ascending_word(2, 3)])
    with pytest.raises(ExpressionError):
        q_map(1, [])


def test_q_with_n2_is_the_identity():
    for e in permutohedron(3).elements:
        assert q_map(2, [e]) == e


def test_q_is_monotone_level_ordered_and_surjective():
    pk = permutohedron(3).elements
    image = {}
    for cells in itertools.product(pk, repeat=2):
        out = q_map(3, list(cells))
        assert is_level_ordered(out)
        image[cells] = out
    target = set(downset(3, ascending_word(3, 3)).elements)
    assert set(image.values()) == target
    for (a1, a2), (b1, b2) in itertools.product(image, repeat=2):
        if hom_exists(a1, b1) and hom_exists(a2, b2):
            assert hom_exists(image[(a1, a2)], image[(b1, b2)])


def test_q_image_is_inside_milgram_objects():
    milgram = set(enumerate_objects(3, 3, milgram_only=True))
    assert set(downset(3, ascending_word(3, 3)).elements) <= milgram
