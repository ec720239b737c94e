from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ppdivisor.convex import Cone, Polyhedron
from ppdivisor.divisors import CoverData, ModelKind, QDivisor, YModel, pullback_qdivisor
from ppdivisor.errors import (ChainMismatch, EmptyFiber, OutsideWeightCone, RankMismatch,
                              TailMismatch, UnknownLabel)
from ppdivisor.exact_linalg import Matrix
from ppdivisor.fixtures_kr import (block_model, first_kind_models, interval, point, russell_expected,
                                   russell_model)
from ppdivisor.ppdiv import (PPDivisor, PPMap, Plurifunction, add, compose, evaluate,
                             format_ppdivisor, is_valid_map, linearly_equivalent, pullback, pushforward,
                             subtract, translate_by_div, validity_report)
from strategies import AFFINE, covers, divisors, int_matrices, int_vectors, map_chains, plurifunctions

RUSSELL = russell_model()


def test_format_follows_model_order():
    D = russell_expected()
    assert format_ppdivisor(D) == "{1/2}D3 + {-1/3}D2 + [0,1/6]E"
    assert str(PPDivisor.empty(RUSSELL, Cone.zero(1))) == "0"


def test_trivial_coefficients_are_dropped():
    D = PPDivisor(RUSSELL, {"D3": point(0), "E": interval(0, 1)})
    assert D.support == ("E",)
    assert D.coefficient("D3") == point(0)


def test_constructor_checks():
    with pytest.raises(UnknownLabel):
        PPDivisor(RUSSELL, {"X": point(1)})
    with pytest.raises(TailMismatch):
        PPDivisor(RUSSELL, {"E": point(1)}, Cone([(1,)]))
    with pytest.raises(RankMismatch):
        PPDivisor(RUSSELL, {"E": Polyhedron.point((1, 2))}, Cone.zero(1))
    with pytest.raises(ValueError):
        PPDivisor(RUSSELL, {})


def test_evaluate_russell():
    D = russell_expected()
    assert evaluate(D, (0,)) == QDivisor()
    assert evaluate(D, (6,)) == QDivisor({"D3": 3, "D2": -2})
    assert evaluate(D, (-6,)) == QDivisor({"D3": -3, "D2": 2, "E": -1})
    assert evaluate(D, (1,)) == QDivisor({"D3": Fraction(1, 2), "D2": Fraction(-1, 3)})


def test_evaluate_outside_weight_cone():
    D = PPDivisor(AFFINE, {"A": Polyhedron([(0,)], Cone([(1,)]))})
    assert evaluate(D, (3,)) == QDivisor()
    with pytest.raises(OutsideWeightCone):
        evaluate(D, (-1,))
    with pytest.raises(RankMismatch):
        evaluate(D, (1, 2))


@settings(max_examples=25)
@given(divisors(), st.data())
def test_pushforward_adjunction(D, data):
    F = data.draw(int_matrices(data.draw(st.integers(1, 2)), D.lattice_rank, -3, 3))
    assume(D.tail.image(F).is_pointed)
    pushed = pushforward(F, D)
    u = data.draw(int_vectors(F.nrows, -5, 5))
    try:
        lhs = evaluate(pushed, u)
    except OutsideWeightCone:
        with pytest.raises(OutsideWeightCone):
            evaluate(D, F.T @ u)
        return
    assert lhs == evaluate(D, F.T @ u)


@settings(max_examples=25)
@given(covers(uniform=False), st.data())
def test_pullback_commutes_with_evaluate(c, data):
    D = data.draw(divisors(model=c.target))
    u = data.draw(int_vectors(D.lattice_rank, -5, 5))
    up = pullback(c, D)
    try:
        expected = pullback_qdivisor(c, evaluate(D, u))
    except OutsideWeightCone:
        return
    assert evaluate(up, u) == expected


def test_pullback_scales_by_ramification():
    up, down, cover = first_kind_models(3)
    D = PPDivisor(down, {"E'": interval(0, Fraction(1, 12)), "D'_alpha3": point(Fraction(1, 2))})
    P = pullback(cover, D)
    assert P.coefficient("E") == interval(0, Fraction(1, 6))
    assert P.coefficient("D_alpha3") == point(Fraction(1, 2))
    with pytest.raises(ChainMismatch):
        pullback(cover, P)


def test_pullback_needs_a_preimage():
    src = YModel("s", ModelKind.AFFINE_PLANE, ("a",))
    tgt = YModel("t", ModelKind.AFFINE_PLANE, ("a'", "b'"))
    c = CoverData(src, tgt, {"a'": (("a", 1),)})
    with pytest.raises(EmptyFiber):
        pullback(c, PPDivisor(tgt, {"b'": point(1)}))


def test_add_and_subtract():
    D = russell_expected()
    D2 = PPDivisor(RUSSELL, {"D2": point(Fraction(1, 3)), "E": interval(0, Fraction(1, 3))})
    D3 = PPDivisor(RUSSELL, {"D3": point(Fraction(1, 2)), "E": interval(0, Fraction(1, 2))})
    assert add(D2, D) == D3
    assert subtract(D3, D2) == D
    assert add(D, PPDivisor.empty(RUSSELL, D.tail)) == D


def test_block_equivalence_example():
    m = block_model()
    D = PPDivisor(m, {"D": point(1), "E": interval(0, 1)})
    Dn = PPDivisor(m, {"E": interval(-1, 0)})
    ok, w = linearly_equivalent(D, Dn)
    assert ok and w == Plurifunction([{"u": -1}])
    assert translate_by_div(D, w) == Dn
    assert str(w) == "1/u"


def test_not_equivalent():
    D = russell_expected()
    shifted = translate_by_div(D, Plurifunction([{"u": 1}]))
    bad = PPDivisor(RUSSELL, {**shifted.terms, "E": interval(0, Fraction(1, 3))})
    assert linearly_equivalent(D, bad) == (False, None)
    lone = PPDivisor(RUSSELL, {**D.terms, "E": interval(1, Fraction(7, 6))})
    assert linearly_equivalent(D, lone) == (False, None)
    other_tail = PPDivisor(RUSSELL, {"E": Polyhedron([(0,)], Cone([(1,)]))})
    assert linearly_equivalent(D, other_tail) == (False, None)


@given(divisors(model=RUSSELL, n=1), plurifunctions(RUSSELL, 1))
def test_translation_is_detected_with_witness(D, f):
    moved = translate_by_div(D, f)
    ok, w = linearly_equivalent(D, moved)
    assert ok and w is not None
    assert translate_by_div(D, w) == moved


def test_identity_map_is_valid():
    D = russell_expected()
    assert is_valid_map(PPMap.identity(1), D, D)


def test_invalid_map_detected():
    D = russell_expected()
    smaller = PPDivisor(RUSSELL, {**D.terms, "E": interval(0, Fraction(1, 12))})
    assert not is_valid_map(PPMap.identity(1), D, smaller)
    assert is_valid_map(PPMap.identity(1), smaller, D)
    with pytest.raises(ChainMismatch):
        is_valid_map(PPMap(None, Matrix([[1, 0]]), Plurifunction.trivial(1)), D, D)


def test_map_rejects_wrong_plurifunction_rank():
    with pytest.raises(ChainMismatch):
        PPMap(None, Matrix([[1]]), Plurifunction.trivial(2))


@given(map_chains(1))
def test_identity_is_neutral_for_compose(chain):
    (m,) = chain
    assert compose(m, PPMap.identity(m.source_rank)) == m
    assert compose(PPMap.identity(m.target_rank), m) == m


@settings(max_examples=25)
@given(map_chains(3))
def test_compose_is_associative(chain):
    m1, m2, m3 = chain
    assert compose(m3, compose(m2, m1)) == compose(compose(m3, m2), m1)


def test_validity_report_flags():
    r = validity_report(russell_expected())
    assert r.structural_ok
    d = r.as_dict()
    assert d["semiample"] == "UNKNOWN" and d["big"] == "UNKNOWN"
    aff = validity_report(PPDivisor(AFFINE, {"A": point(1)}))
    assert aff.semiample is True and aff.big is True
    broken = PPDivisor(AFFINE, {"A": point(1), "B": Polyhedron([(0,)], Cone([(1,)]))},
                       Cone.zero(1), validate=False)
    rb = validity_report(broken)
    assert not rb.shared_tail and not rb.structural_ok
    assert any("B" in n for n in rb.notes)
