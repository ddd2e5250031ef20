import itertools
import json

import numpy as np
import pytest
from hypothesis import given

from iterated_monoidal.coherence import (
    RewriteStep,
    hom_exists,
    is_nontrivial,
    leq_matrix,
    one_step_rewrites,
    pair_leq,
    reachability_matrix,
    reachability_witness,
    rewrite_closure,
    witness_to_json,
)
from iterated_monoidal.enumeration import build_poset, covers, enumerate_objects
from iterated_monoidal.expressions import ZERO, ExpressionError, Gen, leaves, pair_table, parse, render, restrict
from strategies import objects

A = "(2 #2 3) #1 1"


@pytest.mark.parametrize("target, expected", [("2 #2 1 #2 3", True), ("1 #2 3 #2 2", False), (A, True)])
def test_morphism_example(target, expected):
    assert hom_exists(parse(A, 2), parse(target, 2)) is expected


def test_mismatched_leaves_rejected():
    with pytest.raises(ExpressionError):
        hom_exists(parse("1 #1 2", 2), parse("1 #1 3", 2))


@pytest.mark.parametrize(
    "i, same, j, expected",
    [(1, True, 1, True), (1, True, 2, True), (2, True, 1, False), (1, False, 1, False), (1, False, 2, True)],
)
def test_pair_criterion(i, same, j, expected):
    assert pair_leq(i, same, j) is expected


@pytest.mark.parametrize("n, k", [(2, 2), (3, 2), (2, 3), (3, 3), (2, 4)])
def test_hom_is_partial_order(n, k):
    assert build_poset(n, k).is_partial_order()


def test_leq_matrix_matches_pairwise_calls():
    objs = enumerate_objects(2, 3)
    m = leq_matrix([pair_table(e, 2) for e in objs])
    for (x, a), (y, b) in itertools.product(enumerate(objs), repeat=2):
        assert m[x, y] == hom_exists(a, b)


# ---------------------------------------------------------------- rewrites

def test_octahedron_rewrites():
    got = {render(t) for _, t in one_step_rewrites(parse("2 #1 1", 3), 3)}
    assert got == {"2 #2 1", "1 #2 2", "2 #3 1", "1 #3 2"}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_top_operation_has_no_rewrites(n):
    assert one_step_rewrites(parse(f"1 #{n} 2", n), n) == []


def test_full_interchange_target():
    steps = dict((render(t), s) for s, t in one_step_rewrites(parse("(1 #2 2) #1 (3 #2 4)", 2), 2))
    s = steps["(1 #1 3) #2 (2 #1 4)"]
    assert (s.i, s.j) == (1, 2)
    assert [render(x) for x in (s.x, s.y, s.z, s.w)] == ["1", "2", "3", "4"]


def test_rewrite_step_validation():
    with pytest.raises(ValueError):
        RewriteStep((), 2, 1, 0, 1, 2, Gen(1), ZERO, ZERO, Gen(2))
    with pytest.raises(ValueError):
        RewriteStep((), 1, 2, 0, 1, 2, ZERO, ZERO, Gen(1), Gen(2))


@pytest.mark.parametrize(
    "zeros, ok",
    [((1, 1, 0, 0), False), ((0, 0, 1, 1), False), ((0, 1, 0, 1), False), ((1, 0, 1, 0), False),
     ((1, 0, 0, 1), True), ((0, 1, 1, 0), True), ((0, 0, 0, 0), True), ((1, 0, 0, 0), True)],
)
def test_nontriviality(zeros, ok):
    parts = [ZERO if z else Gen(i + 1) for i, z in enumerate(zeros)]
    assert is_nontrivial(*parts) is ok


@given(objects(2, 4))
def test_steps_are_sound(a):
    for step, b in one_step_rewrites(a, 2):
        assert hom_exists(a, b) and a != b
        assert leaves(b) and sorted(leaves(b)) == sorted(leaves(a))


# ---------------------------------------------------------------- witnesses

def test_single_step_witness():
    chain = reachability_witness(parse("2 #1 1", 2), parse("1 #2 2", 2), 2)
    assert len(chain) == 1
    step = chain[0][0]
    assert (step.i, step.j) == (1, 2)
    assert [render(x) for x in (step.x, step.y, step.z, step.w)] == ["0", "2", "1", "0"]


def test_identity_witness_is_empty():
    a = parse(A, 2)
    assert reachability_witness(a, a, 2) == []


def test_missing_witness():
    assert reachability_witness(parse(A, 2), parse("1 #2 3 #2 2", 2), 2) is None


@given(objects(2, 3), objects(2, 3))
def test_witness_iff_hom(a, b):
    chain = reachability_witness(a, b, 2)
    assert (chain is not None) == hom_exists(a, b)
    if chain:
        cur = a
        for step, nxt in chain:
            assert nxt in {t for _, t in one_step_rewrites(cur, 2)}
            cur = nxt
        assert cur == b


def test_witness_json_format():
    a, b = parse(A, 2), parse("2 #2 1 #2 3", 2)
    data = witness_to_json(a, reachability_witness(a, b, 2))
    json.dumps(data)
    assert data["steps"][-1]["result"] == "2 #2 1 #2 3"
    assert set(data["steps"][0]) == {"path", "i", "j", "splits", "result"}


@pytest.mark.parametrize("n, k", [(2, 2), (3, 2), (4, 2), (2, 3)])
def test_oracle_equivalence(n, k):
    objs = enumerate_objects(n, k)
    m = leq_matrix([pair_table(e, n) for e in objs])
    assert np.array_equal(m, reachability_matrix(objs, n))


def test_parallel_reachability_matches_serial():
    objs = enumerate_objects(3, 3)
    assert np.array_equal(reachability_matrix(objs, 3, jobs=2), reachability_matrix(objs, 3))


def test_rewrite_closure_contains_source():
    a = parse("1 #1 2 #1 3", 2)
    assert a in rewrite_closure(a, 2)
    upset = {b for b in enumerate_objects(2, 3) if hom_exists(a, b)}
    assert rewrite_closure(a, 2) == upset


# -------------------------------------------------------------------- covers

def test_square_covers():
    assert sorted(render(e) for e in covers(2, 2, parse("1 #1 2", 2))) == ["1 #2 2", "2 #2 1"]
    assert covers(2, 2, parse("1 #2 2", 2)) == []


def test_covers_generate_order():
    p = build_poset(2, 3)
    cov = p.cover_matrix.astype(int)
    reach = np.eye(len(p), dtype=int)
    for _ in range(len(p)):
        reach = ((reach + reach @ cov) > 0).astype(int)
    assert np.array_equal(reach.astype(bool), p.leq_matrix)


def test_restriction_is_functorial():
    objs = enumerate_objects(2, 3)
    for a, b in itertools.product(objs, repeat=2):
        if not hom_exists(a, b):
            continue
        for r in (1, 2):
            for s in itertools.combinations((1, 2, 3), r):
                assert hom_exists(restrict(a, s), restrict(b, s))
