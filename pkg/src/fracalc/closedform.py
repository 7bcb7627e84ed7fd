"""Exact results of ``R^s`` on the individual term kinds.

* monomials, any finite base: ``(x-a)**p -> Gamma(p+1)/Gamma(p+s+1) (x-a)**(p+s)``
* exponentials, base ``-inf``: ``exp(k x) -> k**(-s) exp(k x)``
* sinusoids, base ``-inf``: ``sin(x + phi) -> sin(x + phi - s pi/2)``

Rules distribute over sums; a sum has a closed form only if every term does.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import BasePointError, DomainError, UnsupportedOrder
from .funcspace import (
    CausalFunction,
    Constant,
    Cosinusoid,
    Exponential,
    Monomial,
    Sinusoid,
    Term,
    _clean,
    differentiate_term,
    linear_combine,
)
from .specialfn import gamma, log_gamma, recip_gamma

RULE_NAMES = ("identity", "monomial", "exponential", "trig", "linearity", "none")


@dataclass(frozen=True)
class RuleOutcome:
    result: CausalFunction | None
    rule_name: str
    reason: str = ""

    @property
    def applicable(self) -> bool:
        return self.result is not None


def _is_real(s) -> bool:
    return not isinstance(s, complex) or s.imag == 0


def _is_nonneg_int(p) -> bool:
    return _is_real(p) and complex(p).real >= 0 and complex(p).real == int(complex(p).real)


def gamma_ratio(p1, p2):
    """``Gamma(p1) / Gamma(p2)``; zero when ``p2`` is a pole, log-space for large arguments."""
    p1, p2 = _clean(p1), _clean(p2)
    if min(complex(p1).real, complex(p2).real) > 100:
        lr = log_gamma(p1) - log_gamma(p2)
        return _clean(cmath.exp(lr)) if isinstance(lr, complex) else math.exp(lr)
    return _clean(gamma(p1) * recip_gamma(p2))


def _falling(p, k: int):
    out = 1.0
    for j in range(k):
        out *= p - j
    return out


def monomial_coefficient(p, s):
    """Coefficient ``Gamma(p+1)/Gamma(p+s+1)``; an exact integer path when ``-s`` is a positive integer."""
    p, s = _clean(p), _clean(s)
    if _is_real(s) and s < 0 and s == int(s):
        k = int(-s)
        if _is_nonneg_int(p) and complex(p).real < k:
            return 0.0
        return _clean(_falling(p, k))
    return gamma_ratio(p + 1, p + s + 1)


def monomial_rule(p, s, a: float = 0.0, coeff=1.0) -> CausalFunction:
    """``R^s`` of ``coeff * (x - a)**p``.

    A pole of ``Gamma(p + s + 1)`` yields the zero function.

    >>> monomial_rule(2.0, -3.0).terms
    ()
    """
    if complex(p).real <= -1:
        raise DomainError(f"monomial exponent {p} must exceed -1")
    if not math.isfinite(a):
        raise BasePointError("the monomial rule needs a finite base point")
    c = monomial_coefficient(p, s)
    if c == 0:
        return CausalFunction((), a)
    return CausalFunction((Monomial(_clean(coeff * c), _clean(p + s)),), a)


def exponential_rule(k, n, coeff=1.0, base: float = -math.inf) -> CausalFunction:
    """``R^n`` of ``coeff * exp(k x)`` in the Liouville setting: ``k**(-n) exp(k x)``."""
    if base != -math.inf:
        raise BasePointError("the exponential eigen-rule holds only for base point -inf")
    k, n = _clean(k), _clean(n)
    if k == 0:
        raise DomainError("exponential rate must be nonzero")
    integer_order = _is_real(n) and n == int(n)
    if _is_real(k) and k < 0 and not integer_order:
        raise DomainError("negative rates need an integer order (no branch is chosen)")
    if integer_order:
        factor = k ** (-int(n))
    else:
        factor = cmath.exp(-n * cmath.log(k))
    return CausalFunction((Exponential(_clean(coeff * factor), k),), base)


def trig_rule(phase: float, n, kind: str = "sin", coeff=1.0, base: float = -math.inf) -> CausalFunction:
    """Rotation ``sin(x + phase) -> sin(x + phase - n pi/2)`` (``cos`` likewise)."""
    if base != -math.inf:
        raise BasePointError("the trigonometric rotation holds only for base point -inf")
    n = _clean(n)
    if not _is_real(n):
        raise UnsupportedOrder("the trigonometric rule is defined for real orders only")
    cls = {"sin": Sinusoid, "cos": Cosinusoid}[kind]
    return CausalFunction((cls(coeff, phase - n * math.pi / 2),), base)


def _derivative_depth(m) -> int:
    return math.floor(complex(m).real) + 1


def _finite_term(t: Term, s, a: float, convention: str) -> tuple[CausalFunction | None, str]:
    if isinstance(t, Constant):
        p, coeff = 0.0, t.coeff
    elif isinstance(t, Monomial):
        p, coeff = t.power, t.coeff
    else:
        return None, f"no closed form for {type(t).__name__.lower()} with a finite base point"
    re_s = complex(s).real
    integer_derivative = _is_real(s) and s < 0 and s == int(s)
    if re_s <= 0 and not integer_derivative and (convention == "right" or re_s == 0):
        if _is_nonneg_int(p) and complex(p).real < _derivative_depth(-s):
            return CausalFunction((), a), "monomial"
    try:
        return monomial_rule(p, s, a, coeff), "monomial"
    except DomainError as exc:
        return None, str(exc)


def _liouville_term(t: Term, s) -> tuple[CausalFunction | None, str]:
    base = -math.inf
    if isinstance(t, Exponential):
        try:
            return exponential_rule(t.rate, s, t.coeff, base), "exponential"
        except DomainError as exc:
            return None, str(exc)
    if isinstance(t, (Sinusoid, Cosinusoid)):
        if not _is_real(s):
            return None, "complex-order rotation is not defined"
        kind = "sin" if isinstance(t, Sinusoid) else "cos"
        return trig_rule(t.phase, s, kind, t.coeff, base), "trig"
    if isinstance(t, Constant) and complex(s).real <= 0:
        return CausalFunction((), base), "monomial"
    if isinstance(t, Monomial) and _is_real(s) and s < 0 and s == int(s):
        if _is_nonneg_int(t.power):
            c = monomial_coefficient(t.power, s)
            if c == 0:
                return CausalFunction((), base), "monomial"
            return CausalFunction((Monomial(_clean(t.coeff * c), _clean(t.power + s)),), base), "monomial"
    return None, f"no Liouville closed form for {type(t).__name__.lower()} at order {s}"


def try_closed_form(f: CausalFunction, s, convention: str = "right") -> RuleOutcome:
    """Apply the matching rule to every term of ``f``.

    ``convention`` selects the derivative for ``Re(s) < 0`` on a finite
    base: ``"right"`` integrates after differentiating, so polynomial terms of
    degree below ``floor(-Re s) + 1`` vanish; ``"left"`` keeps the plain
    monomial rule.  Pure-imaginary orders always use the right form.
    """
    s = _clean(s)
    if s == 0:
        return RuleOutcome(f, "identity")
    integer_derivative = _is_real(s) and s < 0 and s == int(s)
    pieces = []
    names = set()
    for t in f.terms:
        if integer_derivative and isinstance(t, (Exponential, Sinusoid, Cosinusoid)):
            d = differentiate_term(t, int(-s))
            pieces.append(CausalFunction((d,), f.base))
            names.add("exponential" if isinstance(t, Exponential) else "trig")
            continue
        if f.is_liouville:
            g, name = _liouville_term(t, s)
        else:
            g, name = _finite_term(t, s, f.base, convention)
        if g is None:
            return RuleOutcome(None, "none", name)
        pieces.append(g)
        names.add(name)
    if not pieces:
        return RuleOutcome(CausalFunction((), f.base), "linearity")
    rule = names.pop() if len(pieces) == 1 else "linearity"
    return RuleOutcome(linear_combine([1.0] * len(pieces), pieces), rule)
