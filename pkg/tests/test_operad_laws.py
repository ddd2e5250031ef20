import pytest

from operad_laws import (
    block_permutation,
    check_associativity,
    check_embedding,
    check_equivariance,
    check_unit,
    compositions,
    direct_sum,
    expression_operad,
    graph_operad,
)


def test_compositions():
    assert list(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]
    assert list(compositions(0, 0)) == [()]
    assert list(compositions(2, 3)) == []


def test_block_permutation():
    # swapping a block of size 2 with a block of size 1
    assert block_permutation((2, 1), [2, 1]) == [3, 1, 2]
    assert block_permutation((1, 2), [2, 1]) == [1, 2, 3]


def test_direct_sum():
    assert direct_sum([(2, 1), (1,), (2, 3, 1)]) == [2, 1, 3, 5, 6, 4]


@pytest.mark.parametrize("make", [expression_operad, graph_operad], ids=["E", "K"])
@pytest.mark.parametrize("law", [check_unit, check_associativity, check_equivariance])
def test_laws_small(make, law):
    assert law(make(2), 3) > 0


@pytest.mark.parametrize("n", [2, 3])
def test_embedding_small(n):
    assert check_embedding(n, 3) > 0


def test_a_broken_action_is_caught():
    op = graph_operad(2)
    op.act = lambda x, sigma: x
    with pytest.raises(AssertionError):
        check_equivariance(op, 3)

