import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracalc.closedform import (
    RULE_NAMES,
    exponential_rule,
    gamma_ratio,
    monomial_coefficient,
    monomial_rule,
    trig_rule,
    try_closed_form,
)
from fracalc.errors import BasePointError, DomainError, UnsupportedOrder
from fracalc.funcspace import (
    Cosinusoid,
    Exponential,
    Monomial,
    Sinusoid,
    differentiate,
    evaluate,
    parse,
    structurally_equal,
)
from fracalc.quadrature import frac_integral

E, PI = math.e, math.pi
RATIO = 0.59276174704850288028535455243732
PRODUCT = 22.364994517058857454906921720114


def _coeff(f):
    (t,) = f.terms
    return t.coeff


def test_monomial_rule_examples():
    f = monomial_rule(E, PI)
    (t,) = f.terms
    assert t.power == pytest.approx(E + PI)
    assert t.coeff == pytest.approx(float(mpmath.gamma(mpmath.e + 1) / mpmath.gamma(mpmath.e + mpmath.pi + 1)), rel=1e-13)
    assert monomial_rule(1.0, 0.0).terms == (Monomial(1.0, 1.0),)
    assert monomial_rule(2.0, -3.0).is_zero


def test_monomial_rule_translates_base():
    f = monomial_rule(2.0, 1.0, a=1.5)
    assert evaluate(f, 2.5) == pytest.approx(1 / 3, rel=1e-15)
    assert evaluate(f, 1.0) == 0.0


def test_monomial_rule_rejects_nonintegrable_input():
    with pytest.raises(DomainError):
        monomial_rule(-1.0, 0.5)
    with pytest.raises(BasePointError):
        monomial_rule(1.0, 0.5, a=-math.inf)


def test_monomial_coefficient_integer_derivatives_are_exact():
    assert monomial_coefficient(5.0, -2.0) == 20.0
    assert monomial_coefficient(2.0, -2.0) == 2.0
    assert monomial_coefficient(1.0, -2.0) == 0.0
    assert monomial_coefficient(PI, -1.0) == PI


def test_gamma_ratio_large_arguments():
    assert gamma_ratio(250.5, 251.0) == pytest.approx(float(mpmath.gamma(250.5) / mpmath.gamma(251)), rel=1e-12)


def test_exponential_rule_examples():
    assert exponential_rule(1.0, 0.37).terms == (Exponential(1.0, 1.0),)
    assert exponential_rule(2.0, 1).terms == (Exponential(0.5, 2.0),)
    assert exponential_rule(2.0, -3).terms == (Exponential(8.0, 2.0),)
    assert _coeff(exponential_rule(2.0, 0.5)) == pytest.approx(2**-0.5)
    assert _coeff(exponential_rule(2.0, 0.5 + 1j)) == pytest.approx(complex(mpmath.power(2, -(0.5 + 1j))))


def test_exponential_rule_errors():
    with pytest.raises(BasePointError):
        exponential_rule(2.0, 0.5, base=0.0)
    with pytest.raises(DomainError):
        exponential_rule(-2.0, 0.5)
    assert exponential_rule(-2.0, 2).terms == (Exponential(0.25, -2.0),)


def test_trig_rule_examples():
    (t,) = trig_rule(0.0, 1).terms
    assert math.sin(0.3 + t.phase) == pytest.approx(-math.cos(0.3), abs=1e-15)
    (t,) = trig_rule(0.0, 4).terms
    assert math.sin(0.3 + t.phase) == pytest.approx(math.sin(0.3), abs=1e-15)
    (t,) = trig_rule(0.0, -2, kind="cos").terms
    assert isinstance(t, Cosinusoid)
    assert math.cos(0.3 + t.phase) == pytest.approx(-math.cos(0.3), abs=1e-15)


def test_trig_rule_errors():
    with pytest.raises(BasePointError):
        trig_rule(0.0, 0.5, base=0.0)
    with pytest.raises(UnsupportedOrder):
        trig_rule(0.0, 0.5 + 1j)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("src", ["sin(x)", "cos(x)", "2*sin(x) - cos(x)"])
def test_trig_derivative_matches_differentiate(src, n):
    f = parse(src, -math.inf)
    got = try_closed_form(f, -n)
    assert got.applicable
    assert structurally_equal(got.result, differentiate(f, n), tol=1e-14)
    rotated = trig_rule(0.0, -n)
    assert structurally_equal(rotated, differentiate(parse("sin(x)", -math.inf), n), tol=1e-14)


def test_try_closed_form_examples():
    got = try_closed_form(parse("2*x + x^2"), 1)
    assert got.applicable and got.rule_name == "linearity"
    assert structurally_equal(got.result, parse("x^2 + 0.3333333333333333*x^3"))
    got = try_closed_form(parse("x^pi"), E)
    assert got.rule_name == "monomial"
    expected = float(mpmath.gamma(mpmath.pi + 1) / mpmath.gamma(mpmath.pi + mpmath.e + 1))
    assert _coeff(got.result) == pytest.approx(expected, rel=1e-13)
    got = try_closed_form(parse("sin(x)", 0.0), 0.5)
    assert not got.applicable and got.rule_name == "none" and got.reason


def test_rule_names_are_reported():
    assert try_closed_form(parse("x"), 0).rule_name == "identity"
    assert try_closed_form(parse("exp(2*x)", -math.inf), 0.5).rule_name == "exponential"
    assert try_closed_form(parse("sin(x)", -math.inf), 0.5).rule_name == "trig"
    assert {"identity", "monomial", "exponential", "trig", "linearity", "none"} == set(RULE_NAMES)


def test_constants_under_right_and_left_conventions():
    c = parse("3", 0.0)
    assert try_closed_form(c, -0.5).result.is_zero
    left = try_closed_form(c, -1.7, convention="left").result
    assert evaluate(left, 2.0) == pytest.approx(3 * 2.0**-1.7 / float(mpmath.gamma(1 - 1.7)), rel=1e-13)
    assert try_closed_form(parse("3", -math.inf), -0.5).result.is_zero


def test_liouville_polynomial_integer_derivative():
    got = try_closed_form(parse("x^3 + 2", -math.inf), -2)
    assert structurally_equal(got.result, parse("6*x", -math.inf))
    assert not try_closed_form(parse("x^2", -math.inf), 0.5).applicable


def test_ratio_constant():
    num = _coeff(try_closed_form(parse("x^e"), PI).result)
    den = _coeff(try_closed_form(parse("x^pi"), E).result)
    assert abs(num / den - RATIO) / RATIO <= 1e-12


def test_product_constant():
    a = _coeff(try_closed_form(parse("x^pi"), -E).result)
    b = _coeff(try_closed_form(parse("x^e"), -PI).result)
    assert abs(a * b - PRODUCT) / PRODUCT <= 1e-10


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, E, PI])
@pytest.mark.parametrize("s", [0.3, 1.0, 1.5, PI, 1 + 1j])
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_monomial_rule_against_quadrature(p, s, x):
    closed = monomial_rule(p, s)(x)
    q = frac_integral(parse(f"x^{p!r}"), s, x)
    assert abs(closed - q.value) <= max(1e-8, q.est_error)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(min_value=-0.9, max_value=6.0),
    st.floats(min_value=0.05, max_value=4.0),
    st.floats(min_value=0.05, max_value=4.0),
)
def test_symbolic_semigroup(p, s1, s2):
    once = monomial_rule(p, s1 + s2)
    (inner,) = monomial_rule(p, s2).terms
    twice = monomial_rule(inner.power, s1, coeff=inner.coeff)
    (a,), (b,) = once.terms, twice.terms
    assert b.coeff == pytest.approx(a.coeff, rel=1e-12)
    assert b.power == pytest.approx(a.power, rel=1e-15)


def test_sinusoid_rule_value():
    (t,) = try_closed_form(parse("sin(x)", -math.inf), -0.5).result.terms
    assert isinstance(t, Sinusoid)
    assert math.sin(1 + t.phase) == pytest.approx(0.977061263899475675, rel=1e-14)
