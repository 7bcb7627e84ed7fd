"""Brute-force references and the property suite.

The references here deliberately avoid the Gauss-Jacobi machinery:
finite differences for integer derivatives and a graded-mesh midpoint sum
for fractional integrals (with :func:`scipy.special.gamma` for the
normalisation).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gamma as scipy_gamma

from .errors import DomainError, FracCalcError, OrderError
from .funcspace import CausalFunction, Monomial, constant, evaluate, parse


@dataclass(frozen=True)
class PropertyReport:
    name: str
    residual: float
    tolerance: float
    passed: bool
    context: str = ""

    @classmethod
    def make(cls, name: str, residual: float, tolerance: float, context: str = "") -> PropertyReport:
        residual = float(abs(residual))
        tolerance = float(tolerance)
        return cls(name, residual, tolerance, residual <= tolerance, context)

    def rescaled(self, scale: float) -> PropertyReport:
        return PropertyReport.make(self.name, self.residual, self.tolerance * scale, self.context)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} residual={self.residual:.3e} tol={self.tolerance:.3e} [{self.context}]"


def finite_difference(f: CausalFunction, n: int, x: float, h: float | None = None):
    """Central n-th difference ``delta_h^n f(x) / h**n``; error ``O(h**2)``."""
    if not 1 <= n <= 4:
        raise ValueError(f"difference order must be in 1..4, got {n}")
    if h is None:
        h = 1e-4 * max(1.0, abs(x))
    if not f.is_liouville and x - n * h <= f.base:
        raise DomainError(f"stencil at x = {x} with h = {h} crosses the base point {f.base}")
    pts = np.array([x + (n / 2 - j) * h for j in range(n + 1)])
    coef = np.array([(-1) ** j * math.comb(n, j) for j in range(n + 1)], dtype=float)
    return (np.asarray(evaluate(f, pts)) @ coef) / h**n


def richardson_difference(f: CausalFunction, n: int, x: float, h: float):
    """One Richardson step on :func:`finite_difference`, giving ``O(h**4)`` accuracy."""
    coarse = finite_difference(f, n, x, h)
    fine = finite_difference(f, n, x, h / 2)
    return (4 * fine - coarse) / 3


def riemann_sum_fractional(f: CausalFunction, s, x: float, a: float | None = None, panels: int = 100_000):
    """Midpoint sum for ``(1/Gamma(s)) int_a^x (x-y)**(s-1) f(y) dy`` on a graded mesh.

    Mesh points ``y_j = x - (x-a) (j/N)**(2/Re s)`` cluster at the kernel
    singularity ``y = x``.
    """
    a = f.base if a is None else float(a)
    s = complex(s)
    if s.real < 0.2:
        raise OrderError(f"the graded midpoint reference needs Re(s) >= 0.2, got {s}")
    if panels < 100:
        raise ValueError(f"need at least 100 panels, got {panels}")
    grading = 2.0 / s.real
    t = (np.arange(panels + 1) / panels) ** grading
    dist = (x - a) * t
    mid = 0.5 * (dist[1:] + dist[:-1])
    width = np.diff(dist)
    shifted = CausalFunction(f.terms, a)
    fy = np.asarray(evaluate(shifted, x - mid))
    if s.imag == 0:
        kern = mid ** (s.real - 1)
        total = np.sum(kern * fy * width) / scipy_gamma(s.real)
        return float(np.real_if_close(total)) if not np.iscomplexobj(total) else complex(total)
    kern = np.exp((s - 1) * np.log(mid))
    return complex(np.sum(kern * fy * width) / scipy_gamma(s))


# -- property suite ------------------------------------------------------------

DEFAULT_MONOMIALS = ("x^0.5", "x", "x^2", "x^e", "x^pi")
DEFAULT_SMOOTH = ("x^2", "x^pi", "x^4.5", "sin(x)", "cos(x)", "exp(0.5*x)", "1 + x^3")
DEFAULT_MIXED = ("sin(x)", "exp(-x)", "2*x - cos(x)", "x^1.5 + sin(x)")
SEMIGROUP_S1 = (0.3, 0.5, 1.0, math.e)
SEMIGROUP_S2 = (0.2, 0.7, 1.0, math.pi - math.e)
CONSTANT_ORDERS = (0.3, 0.5, math.e, 1.7)
LINEARITY_ORDERS = (0.5, 1.5, -0.5, 1 + 0.5j)
CLOSED_VS_QUAD_ORDERS = (0.3, 1.0, 1.5, math.pi, 1 + 1j)

FAMILIES = (
    "closed_vs_quad",
    "commutation",
    "constant_left",
    "constant_right",
    "correspondence",
    "k_independence",
    "linearity",
    "oracle_agreement",
    "right_left",
    "semigroup",
)


def default_corpus() -> list[CausalFunction]:
    seen = dict.fromkeys(DEFAULT_MONOMIALS + DEFAULT_SMOOTH + DEFAULT_MIXED)
    return [parse(src, 0.0) for src in seen]


def _is_monomial(f: CausalFunction) -> bool:
    return len(f.terms) == 1 and isinstance(f.terms[0], Monomial) and f.terms[0].power > 0


def valid_depths(f: CausalFunction, m, limit: int = 4) -> list[int]:
    """Depths ``k`` at which ``R^{k-m} D^k f`` exists and ignores ``k``.

    Raising ``k`` by one adds the boundary term ``f^{(k)}(a)``, so every
    monomial exponent must reach ``k`` (``x`` fails at ``k = 2``: ``D x = 1``).
    """
    k0 = math.floor(complex(m).real) + 1
    powers = [complex(t.power).real for t in f.terms if isinstance(t, Monomial)]
    if len(powers) != len(f.terms):
        return [k0]
    return [k for k in range(k0, k0 + limit) if all(p >= k for p in powers)]


def _fmt(s) -> str:
    return repr(s) if not isinstance(s, complex) else f"{s.real!r}{s.imag:+}i"


def run_property_suite(
    corpus: Sequence[CausalFunction] | None = None,
    orders: Sequence | None = None,
    points: Sequence[float] | None = None,
    tolerance_scale: float = 1.0,
    only: str | None = None,
    nodes: int = 64,
    seed: int = 0,
) -> list[PropertyReport]:
    """Run every property family and return one report per instance, sorted by name.

    ``orders`` overrides the linearity orders, ``points`` the evaluation
    points; ``only`` restricts to one family name.
    """
    from . import fracop

    corpus = list(corpus) if corpus is not None else default_corpus()
    points = list(points) if points is not None else [0.5, 1.0, 2.0]
    lin_orders = list(orders) if orders is not None else list(LINEARITY_ORDERS)
    if only is not None and only not in FAMILIES:
        raise ValueError(f"unknown property family {only!r}; choose from {FAMILIES}")
    wanted = (lambda name: True) if only is None else (lambda name: name == only)
    monomials = [f for f in corpus if _is_monomial(f) and f.base == 0.0]
    reports: list[PropertyReport] = []
    rng = random.Random(seed)

    if wanted("linearity"):
        pairs = list(zip(corpus, corpus[1:] + corpus[:1]))
        for f, g in pairs:
            for s in lin_orders:
                alpha, beta = rng.uniform(-2, 2), rng.uniform(-2, 2)
                x = points[len(reports) % len(points)]
                try:
                    combo = fracop.apply(alpha * f + beta * g, s, x, nodes=nodes)
                    rf = fracop.apply(f, s, x, nodes=nodes)
                    rg = fracop.apply(g, s, x, nodes=nodes)
                except FracCalcError:
                    continue
                lhs, rhs = combo.value, alpha * rf.value + beta * rg.value
                tol = 1e-10 * (1 + abs(alpha * rf.value) + abs(beta * rg.value))
                reports.append(
                    PropertyReport.make("linearity", lhs - rhs, tol, f"f={f}, g={g}, s={_fmt(s)}, x={x}")
                )

    if wanted("semigroup") or wanted("commutation"):
        x = 1.0
        for f in monomials:
            for s1 in SEMIGROUP_S1:
                for s2 in SEMIGROUP_S2:
                    ctx = f"f={f}, s1={s1:.6g}, s2={s2:.6g}, x={x}"
                    if wanted("semigroup"):
                        closed = fracop.semigroup_check(f, s1, s2, x, method="closed")
                        reports.append(PropertyReport.make("semigroup", closed.residual, 1e-8, ctx + ", closed"))
                        quad = fracop.semigroup_check(f, s1, s2, x, method="quad", nodes=nodes)
                        reports.append(
                            PropertyReport.make("semigroup", quad.residual, max(1e-8, quad.est_error), ctx + ", quad")
                        )
                    if wanted("commutation"):
                        r = fracop.commutation_residual(f, s1, s2, x, method="closed")
                        reports.append(PropertyReport.make("commutation", r, 1e-10, ctx))

    if wanted("correspondence"):
        for src in DEFAULT_SMOOTH:
            f = parse(src, 0.0)
            for n in (1, 2, 3):
                reports.extend(fracop.correspondence_check(f, n, 1.5, nodes=nodes))

    if wanted("constant_right") or wanted("constant_left"):
        for c in (1.0, -2.5):
            f = constant(c, 0.0)
            for m in CONSTANT_ORDERS:
                for x in points:
                    ctx = f"C={c}, m={m:.6g}, x={x}"
                    if wanted("constant_right"):
                        for method in ("auto", "quad"):
                            r = fracop.right_derivative(f, m, x, method=method, nodes=nodes)
                            reports.append(PropertyReport.make("constant_right", r.value, 0.0, f"{ctx}, {method}"))
                    if wanted("constant_left"):
                        expected = c * (x - f.base) ** (-m) / scipy_gamma(1 - m)
                        for method in ("auto", "quad"):
                            r = fracop.left_derivative(f, m, x, method=method, nodes=nodes)
                            reports.append(
                                PropertyReport.make("constant_left", r.value - expected, 1e-8, f"{ctx}, {method}")
                            )

    if wanted("k_independence"):
        for f in monomials:
            for m in (0.3, 0.5, 1.5):
                ks = valid_depths(f, m)[:2]
                if len(ks) < 2:
                    continue
                v0 = fracop.right_derivative(f, m, 1.0, k=ks[0], nodes=nodes)
                v1 = fracop.right_derivative(f, m, 1.0, k=ks[1], nodes=nodes)
                tol = max(1e-8, v0.est_error + v1.est_error)
                reports.append(
                    PropertyReport.make("k_independence", v0.value - v1.value, tol, f"f={f}, m={m}, k={ks[0]},{ks[1]}")
                )

    if wanted("right_left"):
        # Both sides numerical; with f(a) = 0 the two derivatives coincide.
        for f in monomials:
            if f.terms[0].power < 1:
                continue
            for m in (0.3, 0.5, 0.7):
                for x in points:
                    left = fracop.left_derivative(f, m, x, method="quad", nodes=nodes)
                    right = fracop.right_derivative(f, m, x, method="quad", nodes=nodes)
                    reports.append(
                        PropertyReport.make("right_left", left.value - right.value, 1e-6, f"f={f}, m={m}, x={x}")
                    )

    if wanted("closed_vs_quad"):
        for f in monomials:
            for s in CLOSED_VS_QUAD_ORDERS:
                for x in points:
                    closed = fracop.apply(f, s, x, method="closed")
                    quad = fracop.apply(f, s, x, method="quad", nodes=nodes)
                    reports.append(
                        PropertyReport.make(
                            "closed_vs_quad",
                            closed.value - quad.value,
                            max(1e-8, quad.est_error),
                            f"f={f}, s={_fmt(s)}, x={x}",
                        )
                    )

    if wanted("oracle_agreement"):
        for f in corpus:
            for s in (0.3, 0.5, 1.5, 1 + 0.5j):
                for x in points:
                    quad = fracop.apply(f, s, x, method="quad", nodes=nodes)
                    ref = riemann_sum_fractional(f, s, x, panels=100_000)
                    reports.append(
                        PropertyReport.make(
                            "oracle_agreement",
                            quad.value - ref,
                            1e-3,
                            f"f={f}, s={_fmt(s)}, x={x}",
                        )
                    )

    if tolerance_scale != 1.0:
        reports = [r.rescaled(tolerance_scale) for r in reports]
    return sorted(reports, key=lambda r: (r.name, r.context))


def summarize(reports: Iterable[PropertyReport]) -> tuple[int, int]:
    reports = list(reports)
    return sum(r.passed for r in reports), len(reports)
