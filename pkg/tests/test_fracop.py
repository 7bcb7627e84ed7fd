import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracalc.errors import (
    BasePointError,
    DomainError,
    NonIntegrableDerivative,
    OrderError,
    ParseError,
    UnsupportedOrder,
)
from fracalc.fracop import (
    Order,
    OrderClass,
    apply,
    as_order,
    commutation_residual,
    correspondence_check,
    fd_step,
    left_derivative,
    right_derivative,
    semigroup_check,
    semigroup_residual,
)
from fracalc.funcspace import constant, evaluate, parse
from fracalc.quadrature import iterated_integral

E, PI = math.e, math.pi


@pytest.mark.parametrize(
    "text, value",
    [
        ("0.5", 0.5),
        ("pi", PI),
        ("-e", -E),
        ("1+0.5i", 1 + 0.5j),
        ("0.5-2j", 0.5 - 2j),
        ("-2i", -2j),
        ("i", 1j),
        ("1 + pi*i", 1 + PI * 1j),
        ("3", 3.0),
        ("1e-3", 1e-3),
    ],
)
def test_order_parse(text, value):
    assert Order.parse(text).value == pytest.approx(value)


@pytest.mark.parametrize("text", ["", "x", "1+", "2 3", "pi pi", "1+2"])
def test_order_parse_errors(text):
    with pytest.raises(ParseError):
        Order.parse(text)


def test_order_classes():
    assert Order(0.5).kind is OrderClass.POSITIVE_PART
    assert Order(-0.5 + 3j).kind is OrderClass.NEGATIVE_PART
    assert Order(0).kind is OrderClass.ZERO
    assert Order(2j).kind is OrderClass.PURE_IMAGINARY
    assert Order(2.0).is_integer and not Order(2.5).is_integer and not Order(2 + 1j).is_integer
    assert Order(1 + 0j).value == 1.0 and isinstance(Order(1 + 0j).value, float)
    assert as_order("pi").value == PI
    with pytest.raises(OrderError):
        Order(math.inf)


def test_apply_examples():
    x2 = parse("x^2")
    assert apply(x2, 1, 1.0).value == pytest.approx(1 / 3, rel=1e-15)
    r = apply(x2, -1, 1.0)
    assert r.value == 2.0 and r.method == "closed_form" and r.est_error == 0.0
    expected = float(mpmath.gamma(mpmath.e + 1) / mpmath.gamma(mpmath.e + mpmath.pi + 1))
    assert apply(parse("x^e"), PI, 1.0).value == pytest.approx(expected, rel=1e-13)


def test_apply_identity_at_zero_order():
    for src in ("x^2 + sin(x)", "exp(0.5*x) - 3", "x^0.5"):
        f = parse(src)
        for x in (0.3, 1.0, 2.7):
            assert apply(f, 0, x).value == evaluate(f, x)


def test_apply_is_causal():
    r = apply(parse("x^2", 1.0), 0.5, 0.5, method="quad")
    assert r.value == 0.0


def test_apply_methods():
    f = parse("x^1.5")
    closed = apply(f, 0.7, 1.3, method="closed")
    quad = apply(f, 0.7, 1.3, method="quad")
    assert closed.method == "closed_form" and quad.method == "quadrature"
    assert abs(closed.value - quad.value) <= max(1e-12, quad.est_error)
    assert quad.est_error > 0
    with pytest.raises(UnsupportedOrder):
        apply(parse("sin(x)"), 0.5, 1.0, method="closed")
    with pytest.raises(ValueError):
        apply(f, 0.5, 1.0, method="bogus")
    with pytest.raises(ValueError):
        apply(f, 0.5, 1.0, convention="middle")


def test_apply_falls_back_to_quadrature():
    r = apply(parse("sin(x)"), 0.5, 1.0)
    assert r.method == "quadrature"
    assert r.value == pytest.approx(0.669684259577663560, rel=1e-13)


def test_apply_liouville_closed_forms():
    assert apply(parse("exp(2*x)", -math.inf), 0.5, 0.0).value == pytest.approx(2**-0.5, rel=1e-15)
    r = apply(parse("sin(x)", -math.inf), -0.5, 1.0)
    assert r.value == pytest.approx(math.sin(1 + PI / 4), rel=1e-14)
    with pytest.raises(BasePointError):
        apply(parse("x^2", -math.inf), 0.5, 1.0)


def test_complex_order_monomial():
    r = apply(parse("x"), 0.5 + 0.5j, 1.0, method="quad")
    assert r.method == "quadrature"
    assert r.est_error <= 1e-8
    assert r.value == pytest.approx(0.749110583242864081 - 0.278909280660766954j, rel=1e-13)
    assert apply(parse("x"), 0.5 + 0.5j, 1.0).value == pytest.approx(r.value, rel=1e-13)


def test_pure_imaginary_order_is_flagged():
    for method in ("auto", "quad"):
        r = apply(parse("x^2"), 1j, 1.0, method=method)
        assert r.extension
        assert r.value == pytest.approx(0.707913463940114022 - 0.984525109746978455j, rel=1e-12)
    assert not apply(parse("x^2"), 0.5, 1.0).extension


def test_right_derivative_examples():
    for m in (0.5, 1.7, E, 3.2):
        assert right_derivative(constant(7.0), m, 1.3).value == 0.0
        assert right_derivative(constant(7.0), m, 1.3, method="quad").value == 0.0
    expected = float(mpmath.gamma(mpmath.pi + 1) / mpmath.gamma(mpmath.pi - mpmath.e + 1))
    assert right_derivative(parse("x^pi"), E, 1.0).value == pytest.approx(expected, rel=1e-13)
    assert right_derivative(parse("x^pi"), E, 1.0, method="quad").value == pytest.approx(expected, rel=1e-10)
    assert right_derivative(parse("x^2"), 1, 3.0).value == 6.0


def test_right_derivative_quadrature_matches_closed():
    f = parse("x^2")
    r = right_derivative(f, 0.5, 1.0, method="quad")
    assert r.method == "composition"
    assert r.value == pytest.approx(1.50450555612735009852, rel=1e-12)


def test_right_derivative_k_independence():
    f = parse("x^4.5")
    values = [right_derivative(f, 0.5, 1.2, k=k).value for k in (1, 2, 3, 4)]
    for v in values[1:]:
        assert v == pytest.approx(values[0], abs=1e-8)
    with pytest.raises(OrderError):
        right_derivative(f, 1.5, 1.2, k=1)


def test_right_derivative_smoothness_precondition():
    with pytest.raises(NonIntegrableDerivative):
        right_derivative(parse("x^0.5"), 0.3, 1.0, method="quad")
    with pytest.raises(NonIntegrableDerivative):
        right_derivative(parse("sin(x) + x^0.5"), 0.3, 1.0)


def test_derivative_domain_errors():
    with pytest.raises(DomainError):
        right_derivative(parse("x"), 0.5, 0.0)
    with pytest.raises(OrderError):
        right_derivative(parse("x"), -0.5, 1.0)
    with pytest.raises(OrderError):
        left_derivative(parse("x"), 0, 1.0)


def test_left_derivative_examples():
    for method in ("auto", "quad"):
        assert left_derivative(constant(1.0), 0.5, 1.0, method=method).value == pytest.approx(
            0.5641895835477563, rel=1e-9
        )
        assert left_derivative(parse("x"), 1, 5.0, method=method).value == 1.0


@pytest.mark.parametrize("src", ["x", "x^2", "x^e", "x^pi", "x^1.5"])
def test_left_equals_right_for_smooth_monomials(src):
    f = parse(src)
    left = left_derivative(f, 0.5, 1.0, method="quad")
    right = right_derivative(f, 0.5, 1.0, method="quad")
    assert abs(left.value - right.value) <= 1e-7


@pytest.mark.parametrize("m", [0.3, 0.5, 1.7, E])
@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_left_derivative_of_constant(m, x):
    expected = -2.5 * x**-m * float(mpmath.rgamma(1 - m))
    for method in ("auto", "quad"):
        r = left_derivative(constant(-2.5), m, x, method=method)
        assert r.value == pytest.approx(expected, abs=1e-8)


def test_left_derivative_numeric_falls_back_to_differencing():
    # x^0.5 has no integrable second derivative, so k = 2 needs differencing.
    f = parse("x^0.5")
    r = left_derivative(f, 1.3, 1.3, method="quad")
    exact = left_derivative(f, 1.3, 1.3).value
    assert abs(r.value - exact) <= r.est_error
    assert r.est_error < 1e-5


def test_left_derivative_smooth_non_monomial():
    f = parse("sin(x)")
    m = 0.4
    ref = mpmath.diff(lambda t: mpmath.quad(lambda y: (t - y) ** -m * mpmath.sin(y), [0, t]), 1.2) / mpmath.gamma(1 - m)
    r = left_derivative(f, m, 1.2)
    assert r.value == pytest.approx(float(ref), abs=max(1e-8, r.est_error))


def test_fd_step():
    assert fd_step(1.0, 0.0, 1) == 1e-5
    assert fd_step(10.0, 0.0, 1) == pytest.approx(1e-4)


def test_numeric_results_carry_error_estimates():
    for r in (
        apply(parse("x"), 0.5, 1.0, method="quad"),
        right_derivative(parse("x^2"), 0.5, 1.0, method="quad"),
        left_derivative(parse("x^2"), 0.5, 1.0, method="quad"),
    ):
        assert r.method != "closed_form" and r.est_error > 0


def test_semigroup_examples():
    assert semigroup_residual(parse("x"), 0.5, 0.5, 1.0) <= 1e-10
    assert semigroup_check(parse("x"), 0.5, 0.5, 1.0).composed == pytest.approx(0.5, abs=1e-10)
    g = semigroup_check(parse("x^2"), 1, 1, 1.0)
    assert g.residual <= 1e-10
    assert g.composed == pytest.approx(iterated_integral(parse("x^2"), 2, 1.0), abs=1e-10)
    inv = semigroup_check(parse("x^e"), PI, -PI, 2.0)
    assert inv.residual <= 1e-7
    assert inv.composed == pytest.approx(2**E, abs=1e-7)


@pytest.mark.parametrize("s1, s2", [(0.3, 0.2), (0.5, PI - E), (E, 0.7), (1.0, 1.0)])
def test_semigroup_quadrature(s1, s2):
    res = semigroup_check(parse("x^pi"), s1, s2, 1.0, method="quad")
    assert res.method == "quadrature"
    assert res.residual <= max(1e-8, res.est_error)


def test_semigroup_quadrature_sum_of_leaves():
    res = semigroup_check(parse("x^0.5 + sin(x)"), 0.4, 0.6, 1.5, method="quad")
    assert res.residual <= max(1e-8, res.est_error)


def test_semigroup_requires_positive_parts_for_quadrature():
    with pytest.raises(OrderError):
        semigroup_check(parse("x"), 0.5, -0.2, 1.0, method="quad")


def test_commutation():
    assert commutation_residual(parse("x^e"), 0.3, PI - E, 1.0) <= 1e-10
    assert commutation_residual(parse("x^0.5"), 0.5, 0.7, 1.3, method="quad") <= 1e-10


def test_correspondence_examples():
    reports = {r.name: r for r in correspondence_check(parse("x^2"), 1, 1.0)}
    assert reports["correspondence_integral"].residual <= 1e-10
    assert reports["correspondence_derivative"].residual <= 1e-8
    legs = correspondence_check(parse("x^pi"), 2, 1.5)
    assert all(r.residual <= 1e-6 for r in legs if r.name != "correspondence_limit")
    assert len(legs) == 4 and all(r.passed for r in legs)


_coeff = st.floats(min_value=-2, max_value=2)


@settings(max_examples=80, deadline=None)
@given(_coeff, _coeff, st.sampled_from([0.5, 1.5, -0.5, 1 + 0.5j]), st.floats(min_value=0.2, max_value=3))
def test_linearity(alpha, beta, s, x):
    f, g = parse("x^2 + sin(x)"), parse("x^pi - cos(x)")
    lhs = apply(alpha * f + beta * g, s, x).value
    rf, rg = apply(f, s, x).value, apply(g, s, x).value
    assert abs(lhs - alpha * rf - beta * rg) <= 1e-10 * (1 + abs(alpha * rf) + abs(beta * rg))


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.05, max_value=3.0), st.floats(min_value=0.05, max_value=3.0))
def test_semigroup_closed_form_random(s1, s2):
    assert semigroup_residual(parse("x^1.5"), s1, s2, 1.7) <= 1e-10 * max(1.0, apply(parse("x^1.5"), s1 + s2, 1.7).value)
