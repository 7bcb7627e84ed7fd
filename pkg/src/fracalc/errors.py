"""Exception types raised across :mod:`fracalc`."""

from __future__ import annotations


class FracCalcError(Exception):
    """Base class for every error raised by this package."""


class PoleError(FracCalcError, ValueError):
    """Gamma evaluated at a non-positive integer."""


class DomainError(FracCalcError, ValueError):
    """Evaluation point outside the region where an operation is defined."""


class ParseError(FracCalcError, ValueError):
    """Malformed expression or literal.

    ``offset`` is the byte offset into the source where parsing stopped.
    """

    def __init__(self, message: str, offset: int = 0, source: str = "") -> None:
        self.offset = offset
        self.source = source
        super().__init__(f"{message} (at offset {offset})")


class NonIntegrableDerivative(FracCalcError, ValueError):
    """The k-th derivative of a term is not integrable against the kernel."""


class MixedBasePoints(FracCalcError, ValueError):
    """Functions with different base points were combined."""


class InvalidWeight(FracCalcError, ValueError):
    """Jacobi weight exponent at or below -1."""


class OrderError(FracCalcError, ValueError):
    """Operator order outside the range accepted by an operation."""


class UnsupportedOrder(OrderError):
    """Order that no implemented path can evaluate reliably."""


class BasePointError(FracCalcError, ValueError):
    """Rule applied under a base point where it does not hold."""
