from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ppdivisor.errors import InvalidParameters, NoBezoutWithDivisibility
from ppdivisor.fixtures_kr import (KRFirstKind, KRSecondKind, bezout_pair, bezout_pairs, first_kind,
                                   interval, point, russell_cubic, second_kind)
from ppdivisor.session import load_fixtures


@given(st.integers(2, 12), st.integers(2, 12), st.integers(1, 4))
def test_bezout_pair_rule(alpha3, alpha2, d):
    if gcd(alpha3, alpha2) != 1 or gcd(d, alpha2) != 1:
        return
    a, b = bezout_pair(alpha3, alpha2, divisible_by=d)
    assert a * alpha3 + b * alpha2 == 1 and a % d == 0
    assert (a, b) == oracles.bezout_brute(alpha3, alpha2, d)


def test_bezout_pairs_listing():
    pairs = bezout_pairs(3, 2, 10)
    assert (1, -1) in pairs and (-1, 2) in pairs
    assert all(3 * a + 2 * b == 1 and abs(a) <= 10 and abs(b) <= 10 for a, b in pairs)
    assert len(pairs) == len({a for a in range(-10, 11) if (1 - 3 * a) % 2 == 0 and abs((1 - 3 * a) // 2) <= 10})


def test_bezout_window_exhausted():
    with pytest.raises(NoBezoutWithDivisibility):
        bezout_pair(7, 5, divisible_by=4, window=2)


def test_russell_fixture_checks():
    fx = russell_cubic()
    assert all(fx.checks.values()), fx.checks
    assert str(fx.expected) == "{1/2}D3 + {-1/3}D2 + [0,1/6]E"
    assert str(fx.D_2) == "{1/3}D2 + [0,1/3]E"
    assert str(fx.D_3) == "{1/2}D3 + [0,1/2]E"


@pytest.mark.parametrize("d,a2,a3", [(2, 2, 3), (3, 2, 3), (4, 3, 7), (2, 3, 5)])
def test_first_kind_examples(d, a2, a3):
    fx = first_kind(KRFirstKind(d, a2, a3))
    assert all(fx.checks.values()), fx.checks
    assert fx.descended.coefficient("E'") == interval(0, Fraction(1, (d - 1) * a2 * a3))


@pytest.mark.parametrize("args", [(1, 2, 3), (2, 1, 3), (2, 3, 3), (2, 2, 4), (2, 3, 2)])
def test_first_kind_rejects_parameters(args):
    with pytest.raises(InvalidParameters):
        KRFirstKind(*args)


@pytest.mark.parametrize("d,l,a2,a3", [(2, 2, 3, 5), (2, 1, 3, 5), (3, 2, 2, 5), (3, 1, 2, 3)])
def test_second_kind_examples(d, l, a2, a3):
    fx = second_kind(KRSecondKind(d, l, a2, a3))
    assert all(fx.checks.values()), fx.checks
    a, b = fx.bezout
    assert fx.primed == (Fraction(a, d), b)
    last = "E_x" if d * l - 1 > 1 else "E_d"
    assert fx.final.coefficient(last) == interval(0, Fraction(1, (d * l - 1) * a2 * a3))


@pytest.mark.parametrize("args", [(1, 1, 3, 5), (2, 0, 3, 5), (2, 1, 2, 5), (2, 1, 3, 6), (2, 1, 1, 5)])
def test_second_kind_rejects_parameters(args):
    with pytest.raises(InvalidParameters):
        KRSecondKind(*args)


def test_golden_session_matches_computation():
    s = load_fixtures()
    fx = russell_cubic()
    assert s.divisor("cubic") == fx.expected
    assert s.divisor("D_2") == fx.D_2 and s.divisor("D_3") == fx.D_3
    first = first_kind(KRFirstKind(3, 2, 3))
    assert s.divisor("first_up") == first.upstairs
    assert s.divisor("first_down") == first.descended
    second = second_kind(KRSecondKind(2, 2, 3, 5))
    assert s.divisor("second_up") == second.upstairs
    assert s.divisor("second_mid") == second.intermediate
    assert s.divisor("second_final") == second.final
    assert s.divisor("second_final").coefficient("Dx_alpha3") == point(second.primed[0] / 3)
