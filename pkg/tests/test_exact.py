from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from djkm.exact import (
    C,
    ONE,
    ZERO,
    ExponentMinusOne,
    LaurentSeries,
    NotDivisible,
    PolyC,
    TruncationUnderflow,
    exact_div,
    parse_rational,
    series_sqrt_gegenbauer,
    series_sqrt_newton,
)

rationals = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 12))
polys = st.lists(rationals, max_size=5).map(PolyC)


def test_parse_rational():
    assert parse_rational("3/5") == Fraction(3, 5)
    assert parse_rational(" -7/3 ") == Fraction(-7, 3)
    assert parse_rational(4) == 4
    with pytest.raises(ValueError):
        parse_rational("abc")
    with pytest.raises(ValueError):
        parse_rational("")


def test_poly_basics():
    p = (C * C * 32 - 5) / 35
    assert str(p) == "-1/7 + 32c^2/35"
    assert p.degree == 2
    assert p(Fraction(1, 2)) == Fraction(3, 35)
    assert ZERO.degree == -1 and not ZERO
    assert PolyC((3,)) == 3 and hash(PolyC((3,))) == hash(3)


def test_poly_json_roundtrip():
    p = PolyC((Fraction(1, 2), 0, -3))
    assert p.to_json() == [[1, 2], [0, 1], [-3, 1]]
    assert PolyC.from_json(p.to_json()) == p
    assert PolyC.parse(str(p)) == p


def test_exact_div():
    assert exact_div(C * C - 1, C - 1) == C + 1
    with pytest.raises(NotDivisible):
        exact_div(C * C + 1, C - 1)
    with pytest.raises(ZeroDivisionError):
        exact_div(C, ZERO)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == ZERO


@given(polys, polys.filter(bool))
def test_divmod(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_series_truncation():
    s = LaurentSeries(0, [1, 2, 3], 3)
    assert s[2] == 3
    with pytest.raises(TruncationUnderflow):
        s[3]
    t = s * LaurentSeries.polynomial({-1: 1})
    assert t.order == 2 and t[-1] == 1


def test_antiderivative_refuses_residue():
    s = LaurentSeries.polynomial({-1: 1})
    with pytest.raises(ExponentMinusOne):
        s.antiderivative()
    ok = LaurentSeries(0, [1, 1], 2).antiderivative()
    assert ok[1] == 1 and ok[2] == Fraction(1, 2) and ok.order == 3


def test_derivative_lowers_order():
    s = LaurentSeries(0, [1, 1, 1], 3)
    assert s.derivative().order == 2


def test_inverse():
    s = LaurentSeries(0, [1, -1], None)  # 1 - z
    inv = s.inverse(10)
    assert all(inv[k] == 1 for k in range(10))
    assert (s * inv).is_zero_to(10) is False
    assert (s * inv - LaurentSeries.polynomial({0: 1})).is_zero_to(10)


def test_sqrt_two_ways():
    g = series_sqrt_gegenbauer(20)
    n = series_sqrt_newton(20)
    for k in range(0, 20):
        assert g[k] == n[k]
    # z*sqrt(1 - 2cz^2 + z^4) = z - cz^3 + ...
    assert g[1] == ONE and g[3] == -C


@given(st.lists(rationals, min_size=1, max_size=6), st.lists(rationals, min_size=1, max_size=6))
def test_series_product_commutes(a, b):
    x = LaurentSeries(-1, a, 8)
    y = LaurentSeries(0, b, 6)
    assert x * y == y * x
