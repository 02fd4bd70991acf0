from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from domain.errors import ConstantTermError, NotDivisibleError, ZeroInputError
from domain.exppoly import (
    I_UNIT,
    ONE_EXP,
    X_POLY,
    ZERO_EXP,
    ONE,
    ZERO,
    ExpPoly,
    Poly,
    as_complex,
    ep_add,
    ep_as_poly,
    ep_derivative,
    ep_div_by_poly,
    ep_eval,
    ep_eval_many,
    ep_exp_of,
    ep_is_zero,
    ep_mul,
    ep_neg,
    ep_sub,
    ep_scale,
    ep_validate,
    gaussian,
    imag_part,
    poly_gcd,
    real_part,
)
from domain.grammar import parse_exppoly

small_ints = st.integers(min_value=-4, max_value=4)
polys = st.lists(small_ints, min_size=0, max_size=4).map(lambda cs: Poly.from_ints(*cs))
exponents = st.lists(small_ints, min_size=1, max_size=2).map(lambda cs: Poly.from_ints(0, *cs))
exppolys = st.lists(st.tuples(exponents, polys), max_size=3).map(lambda ts: ExpPoly(tuple(ts)))


def test_gaussian_rational_arithmetic() -> None:
    a = gaussian(Fraction(1, 2), 3)
    assert a * (ONE / a) == ONE
    assert I_UNIT * I_UNIT == gaussian(-1)
    assert a - a == ZERO
    assert (real_part(a), imag_part(a)) == (Fraction(1, 2), Fraction(3))
    assert as_complex(a) == complex(0.5, 3)
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_poly_trims_trailing_zeros() -> None:
    p = Poly.from_ints(1, 2, 0, 0)
    assert p.degree == 1
    assert Poly.from_ints(0, 0).is_zero
    assert Poly().degree == -1


def test_poly_divmod_and_gcd() -> None:
    p = Poly.from_ints(-1, 0, 0, 0, 1)
    q, r = p.divmod(Poly.from_ints(-1, 1))
    assert r.is_zero
    assert q == Poly.from_ints(1, 1, 1, 1)
    assert poly_gcd(p, p.derivative()) == Poly.from_ints(1)
    repeated = Poly.from_ints(1, -2, 1)
    assert poly_gcd(repeated, repeated.derivative()) == Poly.from_ints(-1, 1)
    with pytest.raises(ZeroInputError):
        p.divmod(Poly())
    with pytest.raises(ZeroInputError):
        poly_gcd(Poly(), Poly())


def test_gcd_of_power_and_variable() -> None:
    assert poly_gcd(Poly.monomial(1, 2), X_POLY) == X_POLY
    assert poly_gcd(Poly.monomial(gaussian(0, 3), 2), Poly()) == Poly.monomial(1, 2)


def test_divmod_over_gaussian_rationals() -> None:
    divisor = Poly((I_UNIT, gaussian(2)))
    dividend = Poly.from_ints(3, 0, 1)
    quotient, remainder = dividend.divmod(divisor)
    assert quotient * divisor + remainder == dividend
    assert remainder.degree < divisor.degree


def test_canonical_form_merges_and_sorts() -> None:
    a = ExpPoly(((X_POLY, Poly.from_ints(1)), (Poly(), Poly.from_ints(2)), (X_POLY, Poly.from_ints(-1))))
    assert a == ExpPoly.constant(2)
    assert ep_validate(a) is a
    b = parse_exppoly("exp(x^2) + exp(x) + 1")
    assert [e for e, _ in b.terms] == [Poly(), X_POLY, Poly.from_ints(0, 0, 1)]


def test_exponent_with_constant_term_rejected() -> None:
    with pytest.raises(ConstantTermError):
        ep_exp_of(Poly.from_ints(1, 1))
    with pytest.raises(ConstantTermError):
        ExpPoly(((Poly.from_ints(2), Poly.from_ints(1)),))


def test_exp_product_adds_exponents() -> None:
    product = ep_mul(ep_exp_of(X_POLY), ep_exp_of(-X_POLY))
    assert product == ONE_EXP


def test_derivative_product_rule() -> None:
    value = parse_exppoly("x^2*exp(2*x)")
    assert ep_derivative(value) == parse_exppoly("(2*x + 2*x^2)*exp(2*x)")


def test_value_at_zero_and_numeric_eval() -> None:
    value = parse_exppoly("3 + x - 2*exp(x)")
    assert value.value_at_zero() == gaussian(1)
    assert ep_eval(value, 0.5) == pytest.approx(3.5 - 2 * np.exp(0.5))
    values = ep_eval_many(value, np.array([0.0, 1.0]))
    assert values[1] == pytest.approx(4 - 2 * np.e)


def test_overflow_marked_non_finite() -> None:
    huge = ep_exp_of(Poly.from_ints(0, 1000))
    assert not np.isfinite(ep_eval(huge, 10.0))


def test_division_by_poly() -> None:
    value = parse_exppoly("(x + x^2)*exp(x) + 2*x")
    assert ep_div_by_poly(value, X_POLY) == parse_exppoly("(1 + x)*exp(x) + 2")
    with pytest.raises(NotDivisibleError):
        ep_div_by_poly(parse_exppoly("1 + x"), X_POLY)


def test_as_poly() -> None:
    assert ep_as_poly(ZERO_EXP) == Poly()
    assert ep_as_poly(parse_exppoly("1 + x")) == Poly.from_ints(1, 1)
    assert ep_as_poly(parse_exppoly("exp(x)")) is None


@settings(max_examples=60, deadline=None)
@given(exppolys, exppolys, exppolys)
def test_ring_laws(a: ExpPoly, b: ExpPoly, c: ExpPoly) -> None:
    assert ep_add(a, b) == ep_add(b, a)
    assert ep_mul(a, b) == ep_mul(b, a)
    assert ep_mul(a, ep_add(b, c)) == ep_add(ep_mul(a, b), ep_mul(a, c))
    assert ep_is_zero(ep_sub(a, a))
    assert ep_add(a, ep_neg(a)) == ZERO_EXP


@settings(max_examples=40, deadline=None)
@given(exppolys, exppolys)
def test_numeric_evaluation_respects_multiplication(a: ExpPoly, b: ExpPoly) -> None:
    x = 0.3 - 0.2j
    assert ep_eval(ep_mul(a, b), x) == pytest.approx(ep_eval(a, x) * ep_eval(b, x), rel=1e-9, abs=1e-9)


def test_difference_of_squares_with_exponentials() -> None:
    one_plus = ep_add(ONE_EXP, ep_exp_of(X_POLY))
    one_minus = ep_sub(ONE_EXP, ep_exp_of(X_POLY))
    assert ep_mul(one_plus, one_minus) == ep_sub(ONE_EXP, ep_exp_of(Poly.from_ints(0, 2)))


SAMPLE_POINTS = np.random.default_rng(11).uniform(-0.5, 0.5, (50, 2)) @ np.array([1.0, 1.0j])
gaussians = st.builds(gaussian, st.fractions(-3, 3, max_denominator=4), st.fractions(-3, 3, max_denominator=4))


@settings(max_examples=40, deadline=None)
@given(exppolys)
def test_derivative_matches_central_differences(a: ExpPoly) -> None:
    h = 1e-5
    exact = ep_eval_many(ep_derivative(a), SAMPLE_POINTS[:20])
    numeric = (ep_eval_many(a, SAMPLE_POINTS[:20] + h) - ep_eval_many(a, SAMPLE_POINTS[:20] - h)) / (2 * h)
    scale = 1.0 + np.abs(exact) + np.abs(ep_eval_many(a, SAMPLE_POINTS[:20]))
    assert np.all(np.abs(numeric - exact) <= 1e-6 * scale)


@settings(max_examples=40, deadline=None)
@given(exppolys, exppolys, gaussians)
def test_derivative_is_linear(a: ExpPoly, b: ExpPoly, c) -> None:
    combined = ep_add(a, ep_scale(b, c))
    assert ep_derivative(combined) == ep_add(ep_derivative(a), ep_scale(ep_derivative(b), c))


@settings(max_examples=60, deadline=None)
@given(exppolys, exppolys, exppolys, st.booleans())
def test_structural_equality_matches_numeric_agreement(a: ExpPoly, b: ExpPoly, c: ExpPoly, rebuild: bool) -> None:
    other = ep_add(ep_sub(a, c), c) if rebuild else b
    gap = np.abs(ep_eval_many(a, SAMPLE_POINTS) - ep_eval_many(other, SAMPLE_POINTS))
    scale = 1.0 + np.abs(ep_eval_many(a, SAMPLE_POINTS))
    agree = bool(np.all(gap <= 1e-9 * scale))
    assert (a == other) == agree
