"""Gamma, reciprocal gamma, log-gamma and Euler beta for real and complex arguments.

Real inputs give real outputs; complex inputs (``complex`` or numpy complex
scalars) give complex outputs.  The approximation is Lanczos with Godfrey's
``g = 607/128`` coefficient set on ``Re(z) >= 0.5``, extended to the left half
plane by the reflection formula.
"""

from __future__ import annotations

import cmath
import math
from numbers import Complex, Real
from typing import Union

from .errors import PoleError

Scalar = Union[float, complex]

POLE_TOL = 1e-12

_LANCZOS_G = 607 / 128
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)
# 170! is the largest factorial representable as a double.
_MAX_EXACT_FACTORIAL = 171


def _coerce(z) -> Scalar:
    if isinstance(z, bool):
        return float(z)
    if isinstance(z, Real):
        return float(z)
    if isinstance(z, Complex):
        return complex(z)
    raise TypeError(f"expected a real or complex scalar, got {type(z).__name__}")


def is_pole(z) -> bool:
    """True if ``z`` is a real non-positive integer to within ``POLE_TOL``."""
    z = _coerce(z)
    if isinstance(z, complex):
        if abs(z.imag) > POLE_TOL:
            return False
        z = z.real
    return z <= POLE_TOL and abs(z - round(z)) <= POLE_TOL


def _sinpi_real(x: float) -> float:
    # Argument reduction keeps sin(pi*x) exact at integers and half-integers.
    r = math.fmod(x, 2.0)
    if r < 0:
        r += 2.0
    if r == 0.0 or r == 1.0:
        return 0.0
    if r < 0.5:
        return math.sin(math.pi * r)
    if r < 1.5:
        return -math.sin(math.pi * (r - 1.0))
    return math.sin(math.pi * (r - 2.0))


def _cospi_real(x: float) -> float:
    return _sinpi_real(x + 0.5)


def sinpi(z) -> Scalar:
    """``sin(pi * z)`` with exact zeros at the integers."""
    z = _coerce(z)
    if isinstance(z, complex):
        x, y = z.real, z.imag
        return complex(
            _sinpi_real(x) * math.cosh(math.pi * y),
            _cospi_real(x) * math.sinh(math.pi * y),
        )
    return _sinpi_real(z)


def _lanczos_series(zm1: Scalar) -> Scalar:
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (zm1 + i)
    return acc


def _log_gamma_right(z: Scalar) -> Scalar:
    """Analytic log-gamma for ``Re(z) >= 0.5`` (not branch-reduced)."""
    zm1 = z - 1
    t = zm1 + _LANCZOS_G + 0.5
    series = _lanczos_series(zm1)
    if isinstance(z, complex):
        return _LOG_SQRT_2PI + (zm1 + 0.5) * cmath.log(t) - t + cmath.log(series)
    return _LOG_SQRT_2PI + (zm1 + 0.5) * math.log(t) - t + math.log(series)


def _gamma_right(z: Scalar) -> Scalar:
    if isinstance(z, float) and z == int(z) and z < _MAX_EXACT_FACTORIAL:
        return float(math.factorial(int(z) - 1))
    if z.real > 140:
        lg = _log_gamma_right(z)
        if isinstance(z, complex):
            return cmath.exp(lg)
        return math.exp(lg) if lg < 709.7 else math.inf
    zm1 = z - 1
    t = zm1 + _LANCZOS_G + 0.5
    series = _lanczos_series(zm1)
    if isinstance(z, complex):
        return math.sqrt(2 * math.pi) * cmath.exp((zm1 + 0.5) * cmath.log(t) - t) * series
    return math.sqrt(2 * math.pi) * t ** (zm1 + 0.5) * math.exp(-t) * series


def gamma(z) -> Scalar:
    """Euler gamma function, analytically continued off the positive axis.

    Raises :class:`PoleError` at the non-positive integers.
    """
    z = _coerce(z)
    if is_pole(z):
        raise PoleError(f"gamma has a pole at {z}")
    if z.real < 0.5:
        return math.pi / (sinpi(z) * _gamma_right(1 - z))
    return _gamma_right(z)


def recip_gamma(z) -> Scalar:
    """``1/gamma(z)``, an entire function: exactly zero at the poles of gamma."""
    z = _coerce(z)
    zero = 0j if isinstance(z, complex) else 0.0
    if is_pole(z):
        return zero
    if z.real < 0.5:
        return sinpi(z) * _gamma_right(1 - z) / math.pi
    g = _gamma_right(z)
    if g == math.inf:
        return zero
    return 1 / g


def _principal(w: complex) -> complex:
    im = math.remainder(w.imag, 2 * math.pi)
    if im == -math.pi:
        im = math.pi
    return complex(w.real, im)


def log_gamma(z) -> Scalar:
    """Logarithm of gamma.

    For real ``z`` with ``gamma(z) > 0`` the result is real.  Otherwise it is
    complex on the principal branch (imaginary part in ``(-pi, pi]``), so that
    ``exp(log_gamma(z)) == gamma(z)`` holds everywhere off the poles.
    """
    z = _coerce(z)
    if is_pole(z):
        raise PoleError(f"log_gamma has a pole at {z}")
    if isinstance(z, float):
        if z >= 0.5:
            if z == int(z) and z < _MAX_EXACT_FACTORIAL:
                return math.log(math.factorial(int(z) - 1))
            return _log_gamma_right(z)
        s = sinpi(z)
        value = math.log(math.pi / abs(s)) - log_gamma(1 - z)
        return value if s > 0 else complex(value, math.pi)
    if z.real >= 0.5:
        return _principal(_log_gamma_right(z))
    value = math.log(math.pi) - cmath.log(sinpi(z)) - _log_gamma_right(1 - z)
    return _principal(value)


def beta(s1, s2) -> Scalar:
    """Euler beta function ``gamma(s1) * gamma(s2) / gamma(s1 + s2)``."""
    s1, s2 = _coerce(s1), _coerce(s2)
    total = s1 + s2
    for arg in (s1, s2, total):
        if is_pole(arg):
            raise PoleError(f"beta undefined: gamma pole at {arg}")
    if min(s1.real, s2.real) > 0 and max(s1.real, s2.real) > 100:
        lb = log_gamma(s1) + log_gamma(s2) - log_gamma(total)
        return cmath.exp(lb) if isinstance(lb, complex) else math.exp(lb)
    return gamma(s1) * gamma(s2) / gamma(total)
