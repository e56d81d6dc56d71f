from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpx.laurent import LaurentPoly

x = LaurentPoly.var()

polys = st.dictionaries(st.integers(-5, 5), st.fractions(max_denominator=7), max_size=5).map(LaurentPoly)
nonzero_rat = st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(lambda f: f != 0)


def test_no_zero_coefficients():
    p = LaurentPoly({0: 1, 2: 0, -1: Fraction(0)})
    assert p.coefficients == {0: 1}
    assert (x - x).is_zero()


def test_arithmetic_basics():
    p = (x + 2 * x**-1) ** 2
    assert p == x**2 + 4 + 4 * x**-2
    assert p[0] == 4 and p[1] == 0
    assert p.degree_range() == (-2, 2)


def test_inverse_only_for_monomials():
    assert (3 * x**2).inverse() == Fraction(1, 3) * x**-2
    with pytest.raises(ZeroDivisionError):
        (x + 1).inverse()


def test_substitute_scaled_inverse():
    p = x + 2 * x**-1
    assert p.substitute_scaled_inverse(2) == p
    assert (x**2).substitute_scaled_inverse(3) == 9 * x**-2


def test_exact_evaluation():
    p = x**2 + 4 * x**-2 + 1
    assert p(Fraction(1, 2)) == Fraction(1, 4) + 16 + 1
    assert abs(p(1 + 1j) - 1) < 1e-12


def test_repr_readable():
    assert repr(x**2 - 1) == "x^2 - 1"
    assert repr(LaurentPoly()) == "0"


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly()


@given(polys, polys, nonzero_rat)
def test_evaluation_is_a_homomorphism(a, b, t):
    assert (a * b)(t) == a(t) * b(t)
    assert (a + b)(t) == a(t) + b(t)


@given(polys)
def test_hash_consistent_with_eq(a):
    b = LaurentPoly(a.coefficients)
    assert a == b and hash(a) == hash(b)
