from fractions import Fraction
from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppdivisor.convex import Cone, Polyhedron
from ppdivisor.divisors import CoverData, ModelKind, YModel
from ppdivisor.errors import (ChainMismatch, MixedRamification, NotInvariant, OutsideWeightCone,
                              RankMismatch)
from ppdivisor.exact_linalg import Matrix
from ppdivisor.fixtures_kr import (first_kind_models, interval, point, russell_expected, russell_model,
                                   second_kind_models)
from ppdivisor.ppdiv import PPDivisor, compose, evaluate, is_valid_map, pullback
from ppdivisor.quotients import (QuotientStage, bezout_reconstruct, compare_orders, invariant_sublattice,
                                 quotient_effective, quotient_torus_subgroup, run_pipeline,
                                 transported_weight)
from strategies import covers, divisors, int_vectors


@settings(max_examples=100)
@given(st.integers(1, 6), st.integers(1, 2).flatmap(lambda k: int_vectors(k, -5, 5)))
def test_invariant_sublattice_is_exactly_the_invariants(order, w):
    B = invariant_sublattice(order, w)
    k = len(w)
    assert B.shape == (k, k)
    for row in B.rows:
        assert sum(a * b for a, b in zip(row, w)) % order == 0
    # index of the sublattice is the order of the character's image
    assert abs(B.det()) == order // gcd(order, *w)
    # every invariant point in a box is an integer combination of the rows
    for u in product(range(-4, 5), repeat=k):
        if sum(a * b for a, b in zip(u, w)) % order == 0:
            coeffs = B.T.inverse() @ u
            assert all(Fraction(c).denominator == 1 for c in coeffs)


def test_transported_weight():
    B = invariant_sublattice(2, (1, 0))
    assert B == Matrix([[2, 0], [0, 1]])
    assert transported_weight(B, (1, 0)) == (2, 0)


def test_rank_one_torus_quotient_scales():
    D = russell_expected()
    assert quotient_torus_subgroup(D, 2) == D.scaled(2)
    assert quotient_torus_subgroup(D, 3, (1,)) == D.scaled(3)
    assert quotient_torus_subgroup(D, 2, (2,)) == D
    with pytest.raises(RankMismatch):
        quotient_torus_subgroup(D, 2, (1, 0))


@given(divisors(n=2), st.integers(1, 4), int_vectors(2, -3, 3), st.data())
def test_torus_quotient_evaluates_on_invariant_degrees(D, order, w, data):
    B = invariant_sublattice(order, w)
    Q = quotient_torus_subgroup(D, order, w)
    u = data.draw(int_vectors(2, -3, 3))
    try:
        lhs = evaluate(Q, u)
    except OutsideWeightCone:
        return
    assert lhs == evaluate(D, B.T @ u)


@settings(max_examples=25)
@given(covers(), st.data())
def test_descend_then_pull_back(c, data):
    down = data.draw(divisors(model=c.target))
    up = pullback(c, down)
    assert quotient_effective(up, c) == down
    assert pullback(c, quotient_effective(up, c)) == up


def _two_to_one():
    src = YModel("s", ModelKind.AFFINE_PLANE, ("a", "b", "e"))
    tgt = YModel("t", ModelKind.AFFINE_PLANE, ("p", "q"))
    return CoverData(src, tgt, {"p": (("a", 1), ("b", 1)), "q": (("e", 2),)}, 2, name="swap")


def test_descent_errors():
    c = _two_to_one()
    D = PPDivisor(c.source, {"a": point(1), "b": point(2)})
    with pytest.raises(NotInvariant):
        quotient_effective(D, c)
    mixed = CoverData(c.source, c.target, {"p": (("a", 1), ("b", 2)), "q": (("e", 2),)}, 2)
    with pytest.raises(MixedRamification):
        quotient_effective(PPDivisor(c.source, {"a": point(1), "b": point(1)}), mixed)
    with pytest.raises(ChainMismatch):
        quotient_effective(russell_expected(), c)


def test_descent_divides_by_ramification():
    c = _two_to_one()
    D = PPDivisor(c.source, {"a": point(1), "b": point(1), "e": interval(0, 1)})
    assert quotient_effective(D, c) == PPDivisor(c.target, {"p": point(1), "q": interval(0, Fraction(1, 2))})


def test_stage_validation():
    with pytest.raises(ValueError):
        QuotientStage.torus(0)
    up, down, cover = first_kind_models(3)
    s = QuotientStage.effective(cover)
    assert s.order == 2
    assert "effective" in s.describe() and "torus" in QuotientStage.torus(2, (1,)).describe()


def test_empty_pipeline_returns_input():
    D = russell_expected()
    r = run_pipeline(D, [])
    assert r.result == D and r.all_valid and r.records == []


def test_pipeline_records_valid_maps():
    up, mid, low, c1, c2 = second_kind_models(2, 2)
    D = PPDivisor(up, {"D_alpha3": point(Fraction(-2, 3)), "D_alpha2": point(Fraction(3, 5)),
                       "E": interval(0, Fraction(1, 15))})
    r = run_pipeline(D, [QuotientStage.effective(c1), QuotientStage.effective(c2)])
    assert r.all_valid
    assert r.result.coefficient("E_x") == interval(0, Fraction(1, 45))
    assert len(r.lines()) == 3
    total = r.total_map
    assert total.cover.source == up and total.cover.target == low
    assert is_valid_map(total, D, r.result)
    assert total == compose(r.records[1].map, r.records[0].map)


def test_torus_and_effective_stages_commute():
    up, down, cover = first_kind_models(3)
    D = PPDivisor(up, {"D_alpha3": point(Fraction(1, 2)), "D_alpha2": point(Fraction(-1, 3)),
                       "E": interval(0, Fraction(1, 6))})
    a, b, same = compare_orders(D, QuotientStage.torus(2), QuotientStage.effective(cover))
    assert same and a == b
    assert a.coefficient("E'") == interval(0, Fraction(1, 6))


def test_bezout_reconstruct_subtracts_negative_parts():
    m = russell_model()
    block2 = PPDivisor(m, {"D3": point(Fraction(1, 2)), "E": interval(0, Fraction(1, 2))})
    block3 = PPDivisor(m, {"D2": point(Fraction(1, 3)), "E": interval(0, Fraction(1, 3))})
    assert bezout_reconstruct([(1, block2), (-1, block3)]) == russell_expected(m)
    with pytest.raises(ValueError):
        bezout_reconstruct([(0, block2)])


def test_tailed_divisor_quotient_keeps_tail():
    D = PPDivisor(russell_model(), {"E": Polyhedron([(0, 0)], Cone.orthant(2))})
    Q = quotient_torus_subgroup(D, 2, (1, 1))
    assert Q.tail.is_pointed and Q.lattice_rank == 2
