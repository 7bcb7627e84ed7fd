"""Causal functions: expression trees over monomials, exponentials and sinusoids.

A :class:`CausalFunction` is a flat sum of terms together with a base point
``a``.  For finite ``a`` the function vanishes identically on ``x <= a`` and
monomials are measured from the base point, ``c * (x - a)**p``.  A base point
of ``-inf`` selects the Liouville setting, where only the exponential and
trigonometric closed forms are available.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, MixedBasePoints, NonIntegrableDerivative, ParseError

Scalar = Union[float, complex]

_TWO_PI = 2 * math.pi


def _clean(c) -> Scalar:
    """Demote complex numbers with zero imaginary part to float."""
    c = complex(c) if isinstance(c, (complex, np.complexfloating)) else float(c)
    if isinstance(c, complex) and c.imag == 0.0:
        return c.real
    return c


def _is_nonneg_integer(p: Scalar) -> bool:
    return isinstance(p, float) and p >= 0 and p == int(p)


@dataclass(frozen=True)
class Constant:
    coeff: Scalar

    key = ("constant",)

    def value(self, d, x):
        return self.coeff * np.ones_like(x)


@dataclass(frozen=True)
class Monomial:
    """``coeff * (x - a)**power``, or ``coeff * x**power`` under a ``-inf`` base.

    Exponents with ``Re(p) <= -1`` are representable (derivatives produce
    them) but are rejected wherever the kernel integral is formed.
    """

    coeff: Scalar
    power: Scalar

    @property
    def key(self):
        return ("monomial", self.power)

    def value(self, d, x):
        p = self.power
        if isinstance(p, complex):
            return self.coeff * np.exp(p * np.log(d.astype(complex)))
        return self.coeff * d**p


@dataclass(frozen=True)
class Exponential:
    """``coeff * exp(rate * x)``."""

    coeff: Scalar
    rate: Scalar

    @property
    def key(self):
        return ("exp", self.rate)

    def value(self, d, x):
        return self.coeff * np.exp(self.rate * x)


@dataclass(frozen=True)
class Sinusoid:
    """``coeff * sin(x + phase)``."""

    coeff: Scalar
    phase: float = 0.0

    @property
    def key(self):
        return ("sin", self.phase)

    def value(self, d, x):
        return self.coeff * np.sin(x + self.phase)


@dataclass(frozen=True)
class Cosinusoid:
    """``coeff * cos(x + phase)``."""

    coeff: Scalar
    phase: float = 0.0

    @property
    def key(self):
        return ("cos", self.phase)

    def value(self, d, x):
        return self.coeff * np.cos(x + self.phase)


Term = Union[Constant, Monomial, Exponential, Sinusoid, Cosinusoid]
_KIND_ORDER = {"constant": 0, "monomial": 1, "exp": 2, "sin": 3, "cos": 4}


def _sort_key(term: Term):
    kind, param = term.key[0], (term.key[1] if len(term.key) > 1 else 0.0)
    param = complex(param)
    return (_KIND_ORDER[kind], param.real, param.imag)


@dataclass(frozen=True)
class CausalFunction:
    """Immutable sum of terms attached to a base point.

    >>> f = CausalFunction((Monomial(1.0, 2.0),), base=0.0)
    >>> f(3.0), f(-1.0)
    (9.0, 0.0)
    """

    terms: tuple[Term, ...] = ()
    base: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "base", float(self.base))
        if math.isnan(self.base) or self.base == math.inf:
            raise DomainError(f"invalid base point {self.base}")

    @property
    def is_liouville(self) -> bool:
        return self.base == -math.inf

    @property
    def is_zero(self) -> bool:
        return all(t.coeff == 0 for t in self.terms)

    @property
    def is_complex(self) -> bool:
        return any(
            isinstance(v, complex)
            for t in self.terms
            for v in (t.coeff, getattr(t, "power", 0.0), getattr(t, "rate", 0.0))
        )

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other: CausalFunction) -> CausalFunction:
        return linear_combine([1.0, 1.0], [self, other])

    def __sub__(self, other: CausalFunction) -> CausalFunction:
        return linear_combine([1.0, -1.0], [self, other])

    def __mul__(self, c) -> CausalFunction:
        return linear_combine([c], [self])

    __rmul__ = __mul__

    def __neg__(self) -> CausalFunction:
        return linear_combine([-1.0], [self])

    def __str__(self) -> str:
        return format_expr(self)


def check_integrable(t: Term) -> None:
    if isinstance(t, Monomial) and complex(t.power).real <= -1:
        raise DomainError(f"monomial exponent {t.power} is not integrable (need Re(p) > -1)")


def zero(base: float = 0.0) -> CausalFunction:
    return CausalFunction((), base)


def monomial(p: Scalar, coeff: Scalar = 1.0, base: float = 0.0) -> CausalFunction:
    check_integrable(Monomial(coeff, p))
    return CausalFunction((Monomial(_clean(coeff), _clean(p)),), base)


def constant(c: Scalar, base: float = 0.0) -> CausalFunction:
    return CausalFunction((Constant(_clean(c)),), base)


def evaluate(f: CausalFunction, x):
    """Evaluate ``f`` at scalar or array ``x``; exactly zero where ``x <= a``."""
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    dtype = complex if f.is_complex else float
    out = np.zeros(xs.shape, dtype=dtype)
    if f.is_liouville:
        mask = np.ones(xs.shape, dtype=bool)
        d = xs
        for t in f.terms:
            if isinstance(t, Monomial) and not _is_nonneg_integer(t.power) and np.any(xs < 0):
                raise DomainError(f"x**{t.power} is undefined for negative x")
    else:
        mask = xs > f.base
        d = np.where(mask, xs - f.base, 1.0)
    for t in f.terms:
        out = out + np.where(mask, t.value(d, xs), 0.0)
    if scalar:
        v = out[0]
        return complex(v) if dtype is complex else float(v)
    return out


def normalize(f: CausalFunction) -> CausalFunction:
    """Canonical form: phases reduced mod 2*pi, like terms merged, zeros dropped."""
    merged: dict = {}
    for t in f.terms:
        if isinstance(t, Monomial) and t.power == 0:
            t = Constant(t.coeff)
        if isinstance(t, (Sinusoid, Cosinusoid)):
            phase = math.fmod(t.phase, _TWO_PI)
            if phase < 0:
                phase += _TWO_PI
            if math.isclose(phase, _TWO_PI, rel_tol=0, abs_tol=1e-15):
                phase = 0.0
            t = replace(t, phase=phase)
        k = t.key
        merged[k] = replace(t, coeff=_clean(merged[k].coeff + t.coeff)) if k in merged else t
    terms = sorted((t for t in merged.values() if t.coeff != 0), key=_sort_key)
    return CausalFunction(tuple(terms), f.base)


def linear_combine(coeffs: Sequence[Scalar], fs: Sequence[CausalFunction]) -> CausalFunction:
    """Weighted sum ``sum(c_i * f_i)`` of functions sharing one base point."""
    if len(coeffs) != len(fs):
        raise ValueError("coeffs and fs must have equal length")
    if not fs:
        return zero()
    base = fs[0].base
    if any(g.base != base for g in fs):
        raise MixedBasePoints(f"base points differ: {sorted({g.base for g in fs})}")
    terms = [replace(t, coeff=_clean(c * t.coeff)) for c, g in zip(coeffs, fs) for t in g.terms]
    return normalize(CausalFunction(tuple(terms), base))


def _falling(p: Scalar, k: int) -> Scalar:
    out = 1.0
    for j in range(k):
        out *= p - j
    return out


def differentiate_term(t: Term, k: int) -> Term | None:
    """k-th derivative of one term, or ``None`` if it vanishes identically."""
    if k == 0:
        return t
    if isinstance(t, Constant):
        return None
    if isinstance(t, Monomial):
        p = t.power
        if _is_nonneg_integer(p) and p < k:
            return None
        if complex(p).real < k:
            raise NonIntegrableDerivative(
                f"derivative of order {k} of (x-a)^{p} is not integrable at the base point"
            )
        return Monomial(_clean(t.coeff * _falling(p, k)), _clean(p - k))
    if isinstance(t, Exponential):
        return Exponential(_clean(t.coeff * t.rate**k), t.rate)
    return replace(t, phase=t.phase + k * math.pi / 2)


def boundary_value(f: CausalFunction):
    """Right-hand limit ``f(a+)`` on a finite base."""
    if f.is_liouville:
        raise DomainError("a -inf base point has no boundary value")
    total = 0.0
    for t in f.terms:
        if isinstance(t, Monomial):
            p = complex(t.power)
            if p.real < 0 or (p.real == 0 and p.imag != 0):
                raise DomainError(f"(x-a)^{t.power} has no limit at the base point")
            total += t.coeff if p == 0 else 0.0
        else:
            total += complex(t.value(np.array(0.0), np.array(f.base)))
    return _clean(complex(total))


def differentiate(f: CausalFunction, k: int) -> CausalFunction:
    """Symbolic k-th derivative.

    Monomials need ``p >= k`` unless ``p`` is an integer below ``k`` (the term
    then vanishes); otherwise :class:`NonIntegrableDerivative` is raised.
    """
    if k < 0 or int(k) != k:
        raise ValueError(f"derivative order must be a non-negative integer, got {k}")
    terms = [d for t in f.terms if (d := differentiate_term(t, int(k))) is not None]
    return normalize(CausalFunction(tuple(terms), f.base))


def leaf_functions(f: CausalFunction) -> list[CausalFunction]:
    return [CausalFunction((t,), f.base) for t in f.terms]


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_]+)
      | (?P<op>[-+*^()])
    )""",
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            start = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ParseError(f"unexpected character {src[start]!r}", start, src)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(src)))
    return tokens


_NAMED_NUMBERS = {"pi": math.pi, "e": math.e}


@dataclass
class _Parser:
    src: str
    tokens: list[_Token] = field(init=False)
    i: int = 0

    def __post_init__(self) -> None:
        self.tokens = _tokenize(self.src)

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, expected: str):
        t = self.tok
        got = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"expected {expected}, got {got}", t.offset, self.src)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "end":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            self.fail(repr(text))

    def number(self) -> float:
        sign = 1.0
        while self.tok.kind == "op" and self.tok.text in "+-":
            if self.tok.text == "-":
                sign = -sign
            self.i += 1
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return sign * float(t.text)
        if t.kind == "name" and t.text in _NAMED_NUMBERS:
            self.i += 1
            return sign * _NAMED_NUMBERS[t.text]
        self.fail("a number")

    def expr(self) -> list[Term]:
        sign = 1.0
        if self.tok.text in ("+", "-") and self.tok.kind == "op":
            sign = -1.0 if self.tok.text == "-" else 1.0
            self.i += 1
        terms = [self.term(sign)]
        while self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1.0 if self.tok.text == "-" else 1.0
            self.i += 1
            terms.append(self.term(sign))
        if self.tok.kind != "end":
            self.fail("'+', '-' or end of input")
        return terms

    def term(self, sign: float) -> Term:
        t = self.tok
        if t.kind == "num" or (t.kind == "name" and t.text in _NAMED_NUMBERS):
            c = self.number()
            if self.accept("*"):
                return self.atom(sign * c)
            return Constant(sign * c)
        return self.atom(sign)

    def atom(self, coeff: float) -> Term:
        t = self.tok
        if t.kind != "name":
            self.fail("'x', 'sin(x)', 'cos(x)', 'exp(k*x)' or a number")
        if t.text == "x":
            self.i += 1
            power = 1.0
            if self.accept("^"):
                start = self.tok.offset
                power = self.number()
                if power <= -1:
                    raise ParseError(
                        f"exponent {power} violates integrability (need p > -1)", start, self.src
                    )
            return Monomial(coeff, power)
        if t.text in ("sin", "cos"):
            self.i += 1
            self.expect("(")
            if self.tok.text != "x":
                self.fail("'x'")
            self.i += 1
            self.expect(")")
            return Sinusoid(coeff) if t.text == "sin" else Cosinusoid(coeff)
        if t.text == "exp":
            self.i += 1
            self.expect("(")
            sign = 1.0
            while self.tok.kind == "op" and self.tok.text in "+-" and self.tokens[self.i + 1].text == "x":
                sign = -sign if self.tok.text == "-" else sign
                self.i += 1
            if self.tok.text == "x":
                rate = sign
            else:
                rate = self.number()
                self.expect("*")
            if self.tok.text != "x":
                self.fail("'x'")
            self.i += 1
            self.expect(")")
            return Exponential(coeff, rate)
        if t.text in _NAMED_NUMBERS:
            return Constant(coeff * self.number())
        self.fail("'x', 'sin(x)', 'cos(x)', 'exp(k*x)' or a number")


def parse(src: str, base: float = 0.0) -> CausalFunction:
    """Parse an expression such as ``"x^2 + 3*sin(x)"`` into a causal function.

    The grammar::

        expr := term (('+'|'-') term)*
        term := number '*' atom | atom
        atom := 'x' ['^' number] | 'sin(x)' | 'cos(x)' | 'exp(' number '*x)' | number

    Numbers may be decimal literals, ``pi`` or ``e``.  ``base`` is the base
    point ``a`` (``-math.inf`` for the Liouville setting).
    """
    terms = _Parser(src).expr()
    return CausalFunction(tuple(terms), base)


def _fmt_num(c: float) -> str:
    return repr(float(c))


def _fmt_term(t: Term) -> tuple[float, str]:
    """Return (coefficient, atom text) with phases expanded into sin/cos pairs."""
    if isinstance(t, Constant):
        return t.coeff, ""
    if isinstance(t, Monomial):
        return t.coeff, f"x^{_fmt_num(t.power)}"
    if isinstance(t, Exponential):
        return t.coeff, f"exp({_fmt_num(t.rate)}*x)"
    raise AssertionError


def _cos_sin(phase: float) -> tuple[float, float]:
    quarter = phase / (math.pi / 2)
    q = round(quarter)
    if abs(quarter - q) < 1e-12:
        return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[q % 4]
    return math.cos(phase), math.sin(phase)


def format_expr(f: CausalFunction) -> str:
    """Render ``f`` in the parser grammar.

    Phase-shifted sinusoids are expanded as ``cos(phi)*sin(x) + sin(phi)*cos(x)``;
    complex coefficients are printed with Python syntax and do not round-trip.
    """
    pieces: list[tuple[Scalar, str]] = []
    for t in f.terms:
        if isinstance(t, (Sinusoid, Cosinusoid)):
            cp, sp = _cos_sin(t.phase)
            if isinstance(t, Sinusoid):
                pieces += [(t.coeff * cp, "sin(x)"), (t.coeff * sp, "cos(x)")]
            else:
                pieces += [(t.coeff * cp, "cos(x)"), (-t.coeff * sp, "sin(x)")]
        else:
            pieces.append(_fmt_term(t))
    pieces = [(c, a) for c, a in pieces if c != 0]
    if not pieces:
        return "0.0"
    out = []
    for i, (c, atom) in enumerate(pieces):
        if isinstance(c, complex):
            text = f"({c})" + (f"*{atom}" if atom else "")
            out.append(text if i == 0 else f"+ {text}")
            continue
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        text = _fmt_num(mag) + (f"*{atom}" if atom else "")
        if i == 0:
            out.append(("-" if c < 0 else "") + text)
        else:
            out.append(f"{sign} {text}")
    return " ".join(out)


def structurally_equal(f: CausalFunction, g: CausalFunction, tol: float = 1e-12) -> bool:
    """Compare normalized trees term by term with a relative parameter tolerance."""
    fn, gn = normalize(f), normalize(g)
    if fn.base != gn.base or len(fn.terms) != len(gn.terms):
        return False
    for s, t in zip(fn.terms, gn.terms):
        if type(s) is not type(t):
            return False
        for name in ("coeff", "power", "rate", "phase"):
            if hasattr(s, name):
                u, v = getattr(s, name), getattr(t, name)
                if abs(u - v) > tol * max(1.0, abs(u), abs(v)):
                    return False
    return True

