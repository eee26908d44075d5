from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from djkm.exact import C
from djkm.ring import GENERIC, CentralElement, DJKMRing, RingElement


def t(k):
    return RingElement.t(k)


def tu(k):
    return RingElement.tu(k)


def test_u_squared():
    assert GENERIC.mul(tu(0), tu(0)) == t(4) + t(2).scale(-2 * C) + t(0)


def test_specialization_rejects_singular_c():
    with pytest.raises(ValueError):
        DJKMRing(Fraction(1))
    with pytest.raises(ValueError):
        DJKMRing(Fraction(-1))


def test_psi_spot_values():
    assert GENERIC.psi(1) == CentralElement(0, C / 2, 0, Fraction(1, 2), 0)
    assert GENERIC.psi(2) == CentralElement(0, 0, Fraction(1, 5), 0, C * Fraction(4, 5))
    for j in (-1, -2, -3, -4):
        assert GENERIC.psi(j) == CentralElement.basis(j)


def test_psi_table_matches_oracle():
    for k in range(-20, 21):
        assert GENERIC.psi(k) == GENERIC.psi_table(k)


def test_psi_specialized():
    ring = DJKMRing(Fraction(2))
    for k in range(-12, 13):
        assert ring.psi(k) == ring.psi_table(k)


def test_cocycle_examples():
    assert GENERIC.kassel_cocycle(tu(1), tu(-1)) == CentralElement.basis(0, -1)
    assert GENERIC.kassel_cocycle(tu(0), tu(-2)) == CentralElement.basis(0, 2 * C)
    assert GENERIC.kassel_cocycle(t(2), t(-2)) == CentralElement.basis(0, -2)
    assert GENERIC.kassel_cocycle(t(3), t(-3)) == CentralElement.basis(0, -3)


def test_exact_forms_vanish():
    for k in range(-6, 7):
        for f in (t(k), tu(k)):
            assert not GENERIC.reduce(GENERIC.differential(f))


def test_quasi_graded_bound():
    assert GENERIC.quasi_graded_bound(5) == 3


def test_triangular_decomposition():
    minus, h, plus = GENERIC.triangular_decompose(tu(0))
    assert not minus and h == -1
    assert minus + t(0).scale(h) + plus == tu(0)


def test_json_roundtrip():
    f = t(3) + tu(-2).scale(C)
    assert RingElement.from_json(f.to_json()) == f
    z = GENERIC.psi(5)
    assert set(z.to_json()) <= {"w0", "w-1", "w-2", "w-3", "w-4"}


small = st.integers(-5, 5)


@given(small, st.integers(0, 1), small, st.integers(0, 1))
def test_cocycle_antisymmetric(i, p, j, q):
    f, g = RingElement.monomial(i, p), RingElement.monomial(j, q)
    assert GENERIC.kassel_cocycle(f, g) == -GENERIC.kassel_cocycle(g, f)


@given(small, st.integers(0, 1), small, st.integers(0, 1), small, st.integers(0, 1))
def test_cocycle_condition(i, p, j, q, k, s):
    f, g, h = (RingElement.monomial(*x) for x in ((i, p), (j, q), (k, s)))
    m = GENERIC.mul
    total = GENERIC.kassel_cocycle(m(f, g), h) + GENERIC.kassel_cocycle(m(g, h), f) + GENERIC.kassel_cocycle(m(h, f), g)
    assert not total


@given(small, st.integers(0, 1), small, st.integers(0, 1))
def test_multiplication_commutes(i, p, j, q):
    f, g = RingElement.monomial(i, p), RingElement.monomial(j, q)
    assert GENERIC.mul(f, g) == GENERIC.mul(g, f)
