from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from chvatal_verify.polyrat import RatPoly, affine_power, monomial, poly_integrate, poly_mul

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)
polys = st.lists(rationals, max_size=8).map(RatPoly)


@pytest.mark.parametrize("c0,c1,p,expected", [
    (1, 0, 5, [1]),
    (1, F(-1, 2), 2, [1, -1, F(1, 4)]),
    (1, F(1, 3), 0, [1]),
    (1, F(-1, 5), 4, [1, F(-4, 5), F(6, 25), F(-4, 125), F(1, 625)]),
])
def test_affine_power_expansions(c0, c1, p, expected):
    assert affine_power(c0, c1, p).coeffs == tuple(F(c) for c in expected)


def test_affine_power_rejects_negative_exponent():
    with pytest.raises(ValueError):
        affine_power(1, 1, -1)


def test_products_by_hand():
    assert poly_mul(RatPoly([1, F(-1, 2)]), RatPoly([1, F(1, 2)])).coeffs == (1, 0, F(-1, 4))
    eq4 = poly_mul(affine_power(1, F(-1, 3), 2), affine_power(1, 1, 1))
    assert eq4.coeffs == (1, F(1, 3), F(-5, 9), F(1, 9))


def test_definite_integrals_by_hand():
    assert poly_integrate(RatPoly([1]), 0, 1) == 1
    assert poly_integrate(monomial(3), F(1, 2), F(3, 4)) == F(65, 1024)
    eq4 = poly_mul(affine_power(1, F(-1, 3), 2), affine_power(1, 1, 1))
    assert poly_integrate(eq4, 0, 1) == F(109, 108)


def test_zero_polynomial():
    z = RatPoly([0, 0])
    assert z.is_zero() and z.degree == -1 and z.coeffs == ()
    assert poly_mul(z, RatPoly([1, 2])).is_zero()


def test_large_products_use_packed_path_correctly():
    # degrees well past the schoolbook threshold, with signed coefficients
    a = affine_power(3, F(-7, 2), 40)
    b = affine_power(-2, F(5, 3), 37)
    direct = [F(0)] * (a.degree + b.degree + 1)
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            direct[i + j] += x * y
    assert poly_mul(a, b).coeffs == tuple(direct)


@given(polys)
def test_identity_and_canonical_form(p):
    assert poly_mul(RatPoly([1]), p) == p
    assert not p.coeffs or p.coeffs[-1] != 0
    assert all(isinstance(c, F) for c in p.coeffs)


@given(rationals, rationals, st.integers(0, 9), rationals)
def test_affine_power_evaluates_like_the_power(c0, c1, p, x):
    assert affine_power(c0, c1, p)(x) == (c0 + c1 * x) ** p


@given(rationals, rationals, st.integers(0, 6), st.integers(0, 6))
def test_power_law(c0, c1, p, q):
    assert poly_mul(affine_power(c0, c1, p), affine_power(c0, c1, q)) == affine_power(c0, c1, p + q)


@settings(max_examples=50)
@given(polys, polys, rationals, rationals, rationals)
def test_integral_linearity_and_additivity(p, q, a, b, c):
    assert poly_integrate(p + q, a, b) == poly_integrate(p, a, b) + poly_integrate(q, a, b)
    assert poly_integrate(p, a, b) + poly_integrate(p, b, c) == poly_integrate(p, a, c)
    assert poly_integrate(p * F(3, 7), a, b) == F(3, 7) * poly_integrate(p, a, b)


@given(polys, polys, rationals)
def test_product_evaluates_pointwise(p, q, x):
    assert poly_mul(p, q)(x) == p(x) * q(x)
