import inspect
import math

import pytest

from fracalc import oracle
from fracalc.errors import DomainError, OrderError
from fracalc.funcspace import constant, parse
from fracalc.oracle import (
    FAMILIES,
    PropertyReport,
    finite_difference,
    richardson_difference,
    riemann_sum_fractional,
    run_property_suite,
    summarize,
    valid_depths,
)


def test_finite_difference_examples():
    assert finite_difference(parse("x^2"), 1, 1.0, 1e-4) == pytest.approx(2.0, abs=1e-7)
    assert finite_difference(parse("x^2"), 2, 5.0, 1e-3) == pytest.approx(2.0, abs=1e-5)
    assert finite_difference(parse("x^pi"), 1, 1.0, 1e-4) == pytest.approx(math.pi, abs=1e-6)


def test_finite_difference_default_step_and_orders():
    f = parse("sin(x)")
    assert finite_difference(f, 1, 2.0) == pytest.approx(math.cos(2.0), abs=1e-7)
    assert finite_difference(f, 3, 2.0, 1e-2) == pytest.approx(-math.cos(2.0), abs=1e-4)
    assert finite_difference(f, 4, 2.0, 1e-2) == pytest.approx(math.sin(2.0), abs=1e-4)
    with pytest.raises(ValueError):
        finite_difference(f, 5, 2.0)


def test_finite_difference_stays_causal():
    with pytest.raises(DomainError):
        finite_difference(parse("x^2"), 2, 1e-4, 1e-4)


def test_richardson_improves_accuracy():
    f = parse("x^pi")
    h = 1e-2
    plain = abs(finite_difference(f, 2, 1.5, h) - math.pi * (math.pi - 1) * 1.5 ** (math.pi - 2))
    better = abs(richardson_difference(f, 2, 1.5, h) - math.pi * (math.pi - 1) * 1.5 ** (math.pi - 2))
    assert better < plain / 100


def test_riemann_sum_examples():
    assert riemann_sum_fractional(constant(1.0), 1, 1.0, panels=1000) == pytest.approx(1.0, abs=1e-3)
    assert riemann_sum_fractional(parse("x"), 0.5, 1.0, panels=100_000) == pytest.approx(0.75225, abs=1e-3)
    assert riemann_sum_fractional(parse("x^2"), 2, 1.0, panels=10_000) == pytest.approx(1 / 12, abs=1e-4)


def test_riemann_sum_complex_order():
    got = riemann_sum_fractional(parse("x"), 0.5 + 0.5j, 1.0)
    assert got == pytest.approx(0.749110583242864081 - 0.278909280660766954j, abs=1e-3)


def test_riemann_sum_preconditions():
    with pytest.raises(OrderError):
        riemann_sum_fractional(parse("x"), 0.1, 1.0)
    with pytest.raises(ValueError):
        riemann_sum_fractional(parse("x"), 0.5, 1.0, panels=10)


def test_riemann_sum_is_independent_of_gauss_jacobi():
    src = inspect.getsource(riemann_sum_fractional)
    assert "gauss_jacobi" not in src and "frac_integral" not in src and "quadrature" not in src
    assert "quadrature" not in {name for name, _ in inspect.getmembers(oracle, inspect.ismodule)}


def test_property_report():
    r = PropertyReport.make("semigroup", -3e-9, 1e-8, "f=x")
    assert r.passed and r.residual == 3e-9
    assert not r.rescaled(0.1).passed
    assert r.line().startswith("PASS semigroup residual=3.000e-09")


def test_valid_depths():
    assert valid_depths(parse("x"), 0.3) == [1]
    assert valid_depths(parse("x^2"), 1.5) == [2]
    assert valid_depths(parse("x^pi"), 0.5) == [1, 2, 3]
    assert valid_depths(parse("x^4.5"), 1.5)[:2] == [2, 3]


def test_default_suite_passes():
    reports = run_property_suite()
    passed, total = summarize(reports)
    assert total >= 40
    assert passed == total, [r.line() for r in reports if not r.passed][:5]
    names = {r.name for r in reports}
    for family in FAMILIES:
        assert any(n.startswith(family) for n in names), family
    assert reports == sorted(reports, key=lambda r: (r.name, r.context))


def test_constant_reports():
    reports = run_property_suite(only="constant_right")
    assert reports and all(r.residual == 0.0 for r in reports)
    reports = run_property_suite(only="constant_left")
    assert reports and all(r.residual <= 1e-8 for r in reports)


def test_only_filter_and_unknown_family():
    reports = run_property_suite(only="semigroup")
    assert reports and {r.name for r in reports} == {"semigroup"}
    with pytest.raises(ValueError):
        run_property_suite(only="nonsense")


def test_tight_tolerance_fails():
    reports = run_property_suite(only="closed_vs_quad", tolerance_scale=1e-6)
    assert not all(r.passed for r in reports)


def test_custom_corpus_and_points():
    reports = run_property_suite(
        corpus=[parse("x^1.5"), parse("cos(x)")], orders=[0.5], points=[0.7], only="linearity"
    )
    assert len(reports) == 2 and all(r.passed for r in reports)


def test_suite_is_deterministic():
    a = run_property_suite(only="linearity", seed=7)
    b = run_property_suite(only="linearity", seed=7)
    assert a == b
