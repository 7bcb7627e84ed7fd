"""Weakly singular quadrature for ``(1/Gamma(s)) * int_a^x (x-y)**(s-1) f(y) dy``.

After ``u = (x - y)/(x - a)`` the integral becomes
``(x-a)**s / Gamma(s) * int_0^1 u**(s-1) f(x - u (x-a)) du``.  The unit
interval is split at ``u = 1/2``:

* on ``[0, 1/2]`` the kernel singularity is absorbed by a Gauss-Jacobi rule
  with weight ``u**(Re(s)-1)``; for complex orders the factor ``u**(i Im s)``
  oscillates without bound near 0, so that half is instead mapped by
  ``u = exp(-t)/2`` and integrated with composite Gauss-Legendre panels;
* on ``[1/2, 1]`` each monomial leaf ``(y-a)**p`` is integrated with a
  Gauss-Jacobi rule whose weight carries ``p``, which removes the algebraic
  singularity at the base point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from numpy.polynomial import legendre
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, InvalidWeight, OrderError, UnsupportedOrder
from .funcspace import CausalFunction, Monomial, check_integrable, evaluate
from .specialfn import recip_gamma

Scalar = Union[float, complex]

DEFAULT_NODES = 64
MAX_IMAG_ORDER = 20.0
# Truncation point of the exp(-t) substitution; the neglected tail is added to est_error.
_MAX_T = 2000.0
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Jacobi rule for ``int_0^1 u**alpha p(u) du``."""

    alpha: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return len(self.nodes)

    def __call__(self, values: np.ndarray) -> np.ndarray:
        return values @ self.weights


@dataclass(frozen=True)
class QuadResult:
    value: Scalar | np.ndarray
    est_error: float | np.ndarray
    n_used: int


@lru_cache(maxsize=256)
def gauss_jacobi_rule(alpha: float, n: int) -> QuadratureRule:
    """n-point Gauss rule for the weight ``u**alpha`` on ``(0, 1)``.

    Built by Golub-Welsch from the three-term recurrence of the shifted
    Jacobi polynomials; exact for polynomials of degree ``<= 2n - 1``.

    >>> r = gauss_jacobi_rule(0.0, 1)
    >>> r.nodes.tolist(), r.weights.tolist()
    ([0.5], [1.0])
    """
    alpha = float(alpha)
    if not alpha > -1:
        raise InvalidWeight(f"Jacobi weight exponent must exceed -1, got {alpha}")
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    b = alpha
    k = np.arange(n, dtype=float)
    # Recurrence of (1 - x)**0 (1 + x)**b on [-1, 1].
    diag = np.empty(n)
    diag[0] = b / (b + 2)
    kk = k[1:]
    diag[1:] = b * b / ((2 * kk + b) * (2 * kk + b + 2))
    m = np.arange(1, n, dtype=float)
    off2 = 4 * m * m * (m + b) ** 2 / ((2 * m + b) ** 2 * (2 * m + b + 1) * (2 * m + b - 1))
    if n > 1:
        # m = 1 in cancelled form, finite as b -> -1.
        off2[0] = 4 * (1 + b) / ((2 + b) ** 2 * (3 + b))
    # Map x in [-1, 1] to u = (1 + x)/2.
    d = (diag + 1) / 2
    e = np.sqrt(off2) / 2
    if n == 1:
        nodes, vecs = d.copy(), np.ones((1, 1))
    else:
        nodes, vecs = eigh_tridiagonal(d, e)
    weights = vecs[0, :] ** 2 / (alpha + 1)
    order = np.argsort(nodes)
    nodes, weights = nodes[order], weights[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(alpha, nodes, weights)


@lru_cache(maxsize=64)
def _legendre01(q: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = legendre.leggauss(q)
    return (x + 1) / 2, w / 2


def _near_base_exponent(term) -> float:
    if isinstance(term, Monomial):
        p = complex(term.power)
        if not (p.imag == 0 and p.real == int(p.real) and p.real >= 0):
            return p.real
    return 0.0


def _as_order(s) -> Scalar:
    s = complex(s)
    return s.real if s.imag == 0 else s


Integrand = Callable[[np.ndarray], np.ndarray]


def _near_x_half(g: Integrand, s: Scalar, span: np.ndarray, x: np.ndarray, n: int):
    """``int_0^{1/2} u**(s-1) g(y) du`` with ``y = x - u * span``.

    Returns (value, tail bound, rounding bound).
    """
    if not isinstance(s, complex):
        rule = gauss_jacobi_rule(s - 1, n)
        u = rule.nodes / 2
        y = x[:, None] - u[None, :] * span[:, None]
        gy = g(y)
        return 2.0**-s * (gy @ rule.weights), 0.0, _EPS * 2.0**-s * (np.abs(gy) @ rule.weights)
    sigma, theta = s.real, s.imag
    t_end = (37.0 + max(0.0, -math.log(sigma))) / sigma
    tail = 0.0
    if t_end > _MAX_T:
        t_end = _MAX_T
        tail = math.exp(-sigma * t_end) / sigma
    panel = min(1.0, 2.0 / abs(theta))
    count = math.ceil(t_end / panel)
    q = max(8, n // 4)
    xi, wi = _legendre01(q)
    edges = np.linspace(0.0, t_end, count + 1)
    h = np.diff(edges)
    t = (edges[:-1, None] + h[:, None] * xi[None, :]).ravel()
    w = (h[:, None] * wi[None, :]).ravel()
    u = np.exp(-t) / 2
    y = x[:, None] - u[None, :] * span[:, None]
    kernel = np.exp(-s * t) * w
    gy = g(y)
    # exp(-i theta t) carries a phase error of about eps * |s| t.
    rounding = _EPS * abs(2.0**-s) * (np.abs(gy) @ (np.abs(kernel) * (1 + abs(s) * t)))
    return 2.0**-s * (gy @ kernel), tail, rounding


def _near_base_half(
    g: Integrand, s: Scalar, beta: float, span: np.ndarray, x: np.ndarray, a: float, n: int
):
    """``int_{1/2}^1 u**(s-1) g(y) du`` with ``g ~ (y-a)**beta`` near the base point."""
    rule = gauss_jacobi_rule(beta, n)
    v = rule.nodes
    u = 1 - v / 2
    y = x[:, None] - u[None, :] * span[:, None]
    vals = g(y)
    if beta != 0.0:
        vals = vals / (v / 2)[None, :] ** beta
    kernel = u ** (s - 1) if not isinstance(s, complex) else np.exp((s - 1) * np.log(u))
    return 2.0 ** (-beta - 1) * (vals @ (rule.weights * kernel))


def _integrate_once(groups, s, x, a, n):
    span = x - a
    total, tail, rounding = _near_x_half(lambda y: sum(g(y) for g, _ in groups), s, span, x, n)
    for g, beta in groups:
        total = total + _near_base_half(g, s, beta, span, x, a, n)
    return total, tail, rounding


def _check(s, x, a):
    s = _as_order(s)
    if complex(s).real <= 0:
        raise OrderError(f"fractional integral needs Re(s) > 0, got {s}")
    if abs(complex(s).imag) > MAX_IMAG_ORDER:
        raise UnsupportedOrder(
            f"|Im(s)| = {abs(complex(s).imag)} exceeds {MAX_IMAG_ORDER}; "
            "quadrature accuracy is not controlled there"
        )
    if not math.isfinite(a):
        raise DomainError("quadrature needs a finite base point")
    if np.any(x <= a):
        raise DomainError(f"evaluation point must lie right of the base point {a}")
    return s


def integrate_callable(
    g: Integrand,
    s,
    x,
    a: float,
    n: int = DEFAULT_NODES,
    beta: float = 0.0,
) -> QuadResult:
    """``R^s`` of a vectorised callable ``g(y)`` whose behaviour at ``y = a`` is ``~(y-a)**beta``."""
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    s = _check(s, xs, a)
    return _finish([(g, beta)], s, xs, a, n, scalar)


def _finish(groups, s, xs, a, n, scalar) -> QuadResult:
    coarse, _, _ = _integrate_once(groups, s, xs, a, n)
    fine, tail, rounding = _integrate_once(groups, s, xs, a, 2 * n)
    pref = (xs - a) ** s * recip_gamma(s) if not isinstance(s, complex) else (
        np.exp(s * np.log(xs - a)) * recip_gamma(s)
    )
    value = pref * fine
    est = np.abs(pref) * (np.abs(fine - coarse) + rounding)
    if tail:
        est = est + np.abs(pref) * tail * _sup(groups, xs, a)
    if scalar:
        v = value[0]
        v = complex(v) if np.iscomplexobj(value) else float(v)
        return QuadResult(v, float(est[0]), 2 * n)
    return QuadResult(value, est, 2 * n)


def _sup(groups, xs, a):
    if not groups:
        return 0.0
    probe = np.linspace(0, 1, 33)[None, 1:]
    y = a + probe * (xs - a)[:, None]
    return np.max(np.abs(sum(g(y) for g, _ in groups)), axis=1)


def frac_integral(f: CausalFunction, s, x, a: float | None = None, n: int = DEFAULT_NODES) -> QuadResult:
    """Fractional integral ``R^s f`` at ``x`` (scalar or array) by quadrature.

    The returned value uses ``2n`` nodes per rule; ``est_error`` is the
    difference from the ``n``-node result.
    """
    a = f.base if a is None else float(a)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    s = _check(s, xs, a)
    shifted = f if a == f.base else CausalFunction(f.terms, a)
    for term in shifted.terms:
        check_integrable(term)
    buckets: dict[float, list] = {}
    for term in shifted.terms:
        buckets.setdefault(_near_base_exponent(term), []).append(term)
    groups = []
    for beta, terms in sorted(buckets.items()):
        leaf = CausalFunction(tuple(terms), a)
        groups.append((lambda y, leaf=leaf: _eval2d(leaf, y), beta))
    if not groups:
        zero = np.zeros(xs.shape)
        return QuadResult(0.0 if scalar else zero, 0.0 if scalar else zero, 2 * n)
    return _finish(groups, s, xs, a, n, scalar)


def _eval2d(f: CausalFunction, y: np.ndarray) -> np.ndarray:
    return evaluate(f, y.ravel()).reshape(y.shape)


def iterated_integral(f: CausalFunction, n: int, x: float, a: float | None = None, mesh: int = 64) -> float:
    """n-fold nested integral ``int_a^x int_a^{t1} ... f(t_n) dt_n ... dt_1``.

    Each level is a cumulative panel integral: Gauss-Legendre panels with a
    spectral integration matrix, graded geometrically toward ``a``.  The
    previous level's values at the panel nodes feed the next level.
    """
    a = f.base if a is None else float(a)
    if n < 1:
        raise ValueError(f"nesting depth must be >= 1, got {n}")
    if not math.isfinite(a):
        raise DomainError("iterated integral needs a finite base point")
    if x <= a:
        raise DomainError(f"x = {x} must exceed the base point {a}")
    edges = _graded_edges(a, x, mesh)
    q = 12
    nodes, weights, smat = _panel_matrices(q)
    h = np.diff(edges)
    pts = edges[:-1, None] + h[:, None] * nodes[None, :]
    vals = np.asarray(evaluate(f, pts.ravel())).reshape(pts.shape)
    for _ in range(n - 1):
        panel_totals = h * (vals @ weights)
        offsets = np.concatenate([[0.0], np.cumsum(panel_totals)[:-1]])
        vals = offsets[:, None] + h[:, None] * (vals @ smat.T)
    total = np.sum(h * (vals @ weights))
    return complex(total) if np.iscomplexobj(total) else float(total)


def _graded_edges(a: float, x: float, mesh: int) -> np.ndarray:
    uniform = np.linspace(a, x, mesh + 1)
    first = uniform[1] - a
    geometric = a + first * 0.5 ** np.arange(50, 0, -1)
    return np.concatenate([[a], geometric, uniform[1:]])


@lru_cache(maxsize=8)
def _panel_matrices(q: int):
    """Gauss-Legendre nodes/weights on [0, 1] and the matrix ``S[i, j] = int_0^{x_i} l_j``."""
    x, w = legendre.leggauss(q)
    vander = legendre.legvander(x, q - 1)
    inv = np.linalg.inv(vander)
    smat = np.empty((q, q))
    for j in range(q):
        coeffs = inv[:, j]
        anti = legendre.legint(coeffs, lbnd=-1)
        smat[:, j] = legendre.legval(x, anti)
    return (x + 1) / 2, w / 2, smat / 2
