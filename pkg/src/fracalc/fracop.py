"""The unified operator ``R^s``: integrals for ``Re(s) > 0``, derivatives for ``Re(s) < 0``.

``apply`` dispatches on the order.  Positive real part: closed form when
every term has one, otherwise the weakly singular quadrature.  Negative real
part: the right derivative ``R^{k-m} D^k`` (default, annihilates constants)
or the left derivative ``D^k R^{k-m}``, with ``m = -s`` and
``k = floor(Re m) + 1``.  Pure-imaginary orders go through ``R^{1+s} D^1``
and are flagged as an extension.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .closedform import try_closed_form
from .errors import (
    BasePointError,
    DomainError,
    NonIntegrableDerivative,
    OrderError,
    ParseError,
    UnsupportedOrder,
)
from .funcspace import CausalFunction, _clean, boundary_value, differentiate, evaluate, leaf_functions
from .oracle import PropertyReport, richardson_difference
from .quadrature import (
    DEFAULT_NODES,
    _near_base_exponent,
    frac_integral,
    integrate_callable,
    iterated_integral,
)
from .specialfn import recip_gamma

Scalar = Union[float, complex]

METHODS = ("auto", "closed", "quad")
CONVENTIONS = ("right", "left")


class OrderClass(str, Enum):
    POSITIVE_PART = "positive_part"
    NEGATIVE_PART = "negative_part"
    ZERO = "zero"
    PURE_IMAGINARY = "pure_imaginary"


_NUM = r"(?:\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|pi|e)"
_ORDER_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?(?:(?P<sign>[+-])?(?P<im>{_NUM})?\*?(?P<unit>[ij]))?$"
)
_NAMED = {"pi": math.pi, "e": math.e}


def _literal(text: str) -> float:
    sign = -1.0 if text.startswith("-") else 1.0
    body = text.lstrip("+-")
    return sign * (_NAMED[body] if body in _NAMED else float(body))


@dataclass(frozen=True)
class Order:
    """Real or complex operator order with its half-plane classification."""

    value: Scalar

    def __post_init__(self) -> None:
        v = _clean(self.value)
        if isinstance(v, float) and not math.isfinite(v):
            raise OrderError(f"order must be finite, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def kind(self) -> OrderClass:
        v = complex(self.value)
        if v == 0:
            return OrderClass.ZERO
        if v.real > 0:
            return OrderClass.POSITIVE_PART
        if v.real < 0:
            return OrderClass.NEGATIVE_PART
        return OrderClass.PURE_IMAGINARY

    @property
    def is_integer(self) -> bool:
        v = self.value
        return isinstance(v, float) and v == int(v)

    @classmethod
    def parse(cls, text: str) -> Order:
        """Parse ``"0.5"``, ``"pi"``, ``"-e"``, ``"1+0.5i"``, ``"-2i"`` and similar."""
        src = re.sub(r"\s*([+*-])\s*", r"\1", text.strip())
        m = _ORDER_RE.match(src)
        if not src or m is None:
            raise ParseError(f"cannot parse order {text!r}", 0, text)
        re_part, sign, im_part = m.group("re"), m.group("sign"), m.group("im")
        if m.group("unit") is None:
            return cls(_literal(re_part))
        if sign is None:
            # "i", "2i", "-2i": the greedy real group holds the imaginary part.
            if im_part is not None:
                raise ParseError(f"cannot parse order {text!r}", 0, text)
            return cls(complex(0.0, _literal(re_part) if re_part else 1.0))
        real = _literal(re_part) if re_part else 0.0
        imag = _literal(im_part) if im_part else 1.0
        if sign == "-":
            imag = -imag
        return cls(complex(real, imag))


def as_order(s) -> Order:
    if isinstance(s, Order):
        return s
    if isinstance(s, str):
        return Order.parse(s)
    return Order(s)


@dataclass(frozen=True)
class OperatorResult:
    value: Scalar
    method: str  # "closed_form" | "quadrature" | "composition"
    est_error: float
    extension: bool = False


def _value(v):
    v = complex(v) if isinstance(v, (complex, np.complexfloating)) else float(v)
    return _clean(v)


def _numeric(value, est, method: str) -> OperatorResult:
    # A numerical result is never exact: keep at least a rounding-level estimate.
    v = _value(value)
    floor = np.finfo(float).eps * max(abs(v), np.finfo(float).tiny)
    return OperatorResult(v, method, max(float(est), floor))


def _closed(f: CausalFunction, s, x, convention: str, extension: bool = False) -> OperatorResult | None:
    outcome = try_closed_form(f, s, convention)
    if not outcome.applicable:
        return None
    return OperatorResult(_value(outcome.result(x)), "closed_form", 0.0, extension)


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")


def _derivative_depth(m: Scalar) -> int:
    return math.floor(complex(m).real) + 1


def apply(
    f: CausalFunction,
    s,
    x: float,
    convention: str = "right",
    method: str = "auto",
    nodes: int = DEFAULT_NODES,
) -> OperatorResult:
    """Evaluate ``R^s(f)(x)``.

    ``method="closed"`` insists on an exact rule, ``"quad"`` forces the
    numerical route, ``"auto"`` prefers the exact rule when one exists.
    """
    _check_method(method)
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be 'right' or 'left', got {convention!r}")
    order = as_order(s)
    s = order.value
    x = float(x)
    if not f.is_liouville and x <= f.base:
        return OperatorResult(0.0, "closed_form", 0.0)
    kind = order.kind
    if kind is OrderClass.ZERO:
        return OperatorResult(_value(evaluate(f, x)), "closed_form", 0.0)
    if kind is OrderClass.POSITIVE_PART:
        if method != "quad":
            res = _closed(f, s, x, convention)
            if res is not None:
                return res
            if method == "closed":
                raise UnsupportedOrder(try_closed_form(f, s, convention).reason)
        if f.is_liouville:
            raise BasePointError("base point -inf is only reachable through closed forms")
        q = frac_integral(f, s, x, n=nodes)
        return _numeric(q.value, q.est_error, "quadrature")
    if kind is OrderClass.PURE_IMAGINARY:
        res = right_derivative(f, -s, x, method=method, nodes=nodes)
        return OperatorResult(res.value, res.method, res.est_error, True)
    if convention == "left":
        return left_derivative(f, -s, x, method=method, nodes=nodes)
    return right_derivative(f, -s, x, method=method, nodes=nodes)


def _derivative_prelude(f, m, x, method, convention, extension=False):
    _check_method(method)
    order = as_order(m)
    m = order.value
    if complex(m).real < 0 or m == 0:
        raise OrderError(f"derivative order needs Re(m) >= 0 and m != 0, got {m}")
    if not f.is_liouville and x <= f.base:
        raise DomainError(f"x = {x} must exceed the base point {f.base}")
    integer = order.is_integer
    if integer or method != "quad":
        res = _closed(f, -m, x, convention, extension)
        if res is not None:
            return m, res
        if integer or method == "closed" or f.is_liouville:
            reason = try_closed_form(f, -m, convention).reason
            if f.is_liouville and method != "closed":
                raise BasePointError(f"base point -inf is only reachable through closed forms: {reason}")
            raise UnsupportedOrder(reason)
    if f.is_liouville:
        raise BasePointError("base point -inf is only reachable through closed forms")
    return m, None


def right_derivative(
    f: CausalFunction,
    m,
    x: float,
    k: int | None = None,
    method: str = "auto",
    nodes: int = DEFAULT_NODES,
) -> OperatorResult:
    """Right derivative ``D_R^m f = R^{k-m}(D^k f)``.

    ``k`` defaults to ``floor(Re m) + 1``; a larger ``k`` gives the same
    value when ``f`` is smooth enough.  Constants map to exactly zero.
    """
    x = float(x)
    if k is not None:
        method = "quad"
    m, res = _derivative_prelude(f, m, x, method, "right")
    if res is not None:
        return res
    k = _derivative_depth(m) if k is None else int(k)
    inner = _clean(k - m)
    if complex(inner).real <= 0:
        raise OrderError(f"k = {k} is too small for m = {m}: need Re(k - m) > 0")
    g = differentiate(f, k)
    if g.is_zero:
        return OperatorResult(0.0, "closed_form", 0.0)
    q = frac_integral(g, inner, x, n=nodes)
    return _numeric(q.value, q.est_error, "composition")


def fd_step(x: float, a: float, k: int) -> float:
    """Central-difference step for the outer ``D^k`` of the left derivative."""
    h = max(1e-5, 1e-5 * abs(x - a))
    return h ** (3 / (k + 2)) if k > 1 else h


def left_derivative(
    f: CausalFunction,
    m,
    x: float,
    method: str = "auto",
    nodes: int = DEFAULT_NODES,
) -> OperatorResult:
    """Left derivative ``D_L^m f = D^k R^{k-m} f``.

    On the numerical route with ``k = 1`` the inner integral is evaluated by
    quadrature on a central-difference stencil and differenced.  For
    ``k >= 2`` the outer derivative is moved inside by parts when ``D^k f``
    is integrable, leaving boundary terms plus ``R^{k-m} D^k f``;
    otherwise differencing is used there too.
    """
    x = float(x)
    m, res = _derivative_prelude(f, m, x, method, "left")
    if res is not None:
        return res
    k = _derivative_depth(m)
    inner = _clean(k - m)
    a = f.base
    if k > 1:
        try:
            return _left_by_parts(f, m, k, x, nodes)
        except NonIntegrableDerivative:
            pass
    h = fd_step(x, a, k)
    if x - k * h <= a:
        raise DomainError(f"x = {x} is too close to the base point {a} for the difference stencil")
    offsets = np.array([k / 2 - j for j in range(k + 1)])
    weights = np.array([(-1) ** j * math.comb(k, j) for j in range(k + 1)], dtype=float)
    stencil = np.concatenate([x + offsets * h, x + offsets * 2 * h])
    q = frac_integral(f, inner, stencil, n=nodes)
    vals = np.asarray(q.value)
    fine = vals[: k + 1] @ weights / h**k
    coarse = vals[k + 1 :] @ weights / (2 * h) ** k
    # One Richardson step; |fine - coarse|/3 estimates the error of `fine`
    # and bounds that of the extrapolated value.
    value = (4 * fine - coarse) / 3
    errs = np.asarray(q.est_error)
    propagated = float(np.abs(weights) @ errs[: k + 1]) / h**k + float(np.abs(weights) @ errs[k + 1 :]) / (2 * h) ** k
    est = abs(fine - coarse) / 3 + 2 * propagated
    return _numeric(value, est, "composition")


def _left_by_parts(f: CausalFunction, m, k: int, x: float, nodes: int) -> OperatorResult:
    # D^k R^{k-m} f = sum_{j<k} f^(j)(a+) (x-a)^(j-m) / Gamma(j-m+1) + R^{k-m} D^k f,
    # which needs f^(k) integrable but no differencing.
    g = differentiate(f, k)
    d = x - f.base
    value = 0.0
    for j in range(k):
        c = boundary_value(differentiate(f, j))
        if c != 0:
            e = _clean(j - m)
            power = d**e if isinstance(e, float) else cmath.exp(e * math.log(d))
            value += c * power * recip_gamma(_clean(e + 1))
    if g.is_zero:
        return OperatorResult(_value(value), "closed_form", 0.0)
    q = frac_integral(g, _clean(k - m), x, n=nodes)
    return _numeric(value + q.value, q.est_error, "composition")


@dataclass(frozen=True)
class SemigroupResult:
    residual: float
    est_error: float
    composed: Scalar
    direct: Scalar
    method: str


def semigroup_check(
    f: CausalFunction,
    s1,
    s2,
    x: float,
    method: str = "auto",
    nodes: int = DEFAULT_NODES,
) -> SemigroupResult:
    """Compare ``R^{s1}(R^{s2} f)(x)`` with ``R^{s1+s2} f(x)``.

    The closed-form route composes the exact rules.  The quadrature route
    needs ``Re(s1), Re(s2) > 0`` and nests the rule: the inner integral is
    evaluated at every outer node, term by term.
    """
    _check_method(method)
    s1, s2 = as_order(s1).value, as_order(s2).value
    x = float(x)
    total = _clean(s1 + s2)
    if method != "quad":
        inner = try_closed_form(f, s2)
        outer = try_closed_form(inner.result, s1) if inner.applicable else None
        direct = try_closed_form(f, total)
        if outer is not None and outer.applicable and direct.applicable:
            c, d = _value(outer.result(x)), _value(direct.result(x))
            return SemigroupResult(abs(c - d), 0.0, c, d, "closed_form")
        if method == "closed":
            raise UnsupportedOrder("no closed form for this composition")
    if complex(s1).real <= 0 or complex(s2).real <= 0:
        raise OrderError("nested quadrature needs Re(s1) > 0 and Re(s2) > 0")
    composed, est = _nested(f, s1, s2, x, nodes)
    ref = frac_integral(f, total, x, n=nodes)
    direct = _value(ref.value)
    return SemigroupResult(abs(composed - direct), est + float(ref.est_error), composed, direct, "quadrature")


def _nested(f: CausalFunction, s1, s2, x: float, nodes: int) -> tuple[Scalar, float]:
    a = f.base
    value = 0.0
    est = 0.0
    for leaf in leaf_functions(f):
        inner_err = [0.0]

        def inner(y, leaf=leaf, inner_err=inner_err):
            q = frac_integral(leaf, s2, y.ravel(), n=nodes)
            inner_err[0] = max(inner_err[0], float(np.max(q.est_error)))
            return np.asarray(q.value).reshape(y.shape)

        beta = _near_base_exponent(leaf.terms[0]) + complex(s2).real
        q = integrate_callable(inner, s1, x, a, n=nodes, beta=beta)
        value = value + q.value
        bound = abs((x - a) ** complex(s1).real * recip_gamma(complex(s1).real + 1))
        est += float(q.est_error) + inner_err[0] * bound
    return _value(value), est


def semigroup_residual(f: CausalFunction, s1, s2, x: float, method: str = "auto", nodes: int = DEFAULT_NODES) -> float:
    """``|R^{s1} R^{s2} f(x) - R^{s1+s2} f(x)|``."""
    return semigroup_check(f, s1, s2, x, method, nodes).residual


def commutation_residual(f: CausalFunction, s1, s2, x: float, method: str = "auto", nodes: int = DEFAULT_NODES) -> float:
    """``|R^{s1} R^{s2} f(x) - R^{s2} R^{s1} f(x)|``."""
    a = semigroup_check(f, s1, s2, x, method, nodes)
    b = semigroup_check(f, s2, s1, x, method, nodes)
    return abs(a.composed - b.composed)


CORRESPONDENCE_EPS = 1e-4


def correspondence_check(
    f: CausalFunction,
    n: int,
    x: float,
    nodes: int = DEFAULT_NODES,
    tol_integral: float = 1e-8,
    tol_derivative: float = 1e-6,
    tol_limit: float = 1e-3,
) -> list[PropertyReport]:
    """Integer-order agreement of ``R^{+-n}`` with ordinary calculus.

    Returns reports for the integral leg (against the nested integral), the
    derivative leg (against Richardson-extrapolated central differences) and
    the two limit probes ``R^{n +- eps}``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x = float(x)
    ctx = f"f={f}, a={f.base}, n={n}, x={x}"
    integral = apply(f, n, x, nodes=nodes)
    nested = iterated_integral(f, n, x)
    derivative = apply(f, -n, x, nodes=nodes)
    h = 2e-3 * n * max(1.0, abs(x))
    fd = richardson_difference(f, n, x, h)
    reports = [
        PropertyReport.make("correspondence_integral", abs(integral.value - nested), tol_integral, ctx),
        PropertyReport.make("correspondence_derivative", abs(derivative.value - fd), tol_derivative, ctx),
    ]
    for sign in (1, -1):
        near = apply(f, n + sign * CORRESPONDENCE_EPS, x, nodes=nodes)
        label = "+" if sign > 0 else "-"
        reports.append(
            PropertyReport.make(
                "correspondence_limit",
                abs(near.value - integral.value),
                tol_limit,
                f"{ctx}, probe n{label}{CORRESPONDENCE_EPS}",
            )
        )
    return reports
