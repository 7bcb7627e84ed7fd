"""Fractional integrals and derivatives through the single operator ``R^s``.

``R^s f(x) = (1/Gamma(s)) int_a^x (x-y)**(s-1) f(y) dy`` for ``Re(s) > 0``;
for ``Re(s) < 0`` the operator is a derivative of order ``-s`` built from an
integer derivative and a fractional integral.
"""

from .closedform import try_closed_form
from .errors import (
    BasePointError,
    DomainError,
    FracCalcError,
    InvalidWeight,
    MixedBasePoints,
    NonIntegrableDerivative,
    OrderError,
    ParseError,
    PoleError,
    UnsupportedOrder,
)
from .fracop import (
    Order,
    OperatorResult,
    apply,
    commutation_residual,
    correspondence_check,
    left_derivative,
    right_derivative,
    semigroup_check,
    semigroup_residual,
)
from .funcspace import CausalFunction, constant, differentiate, evaluate, linear_combine, monomial, parse
from .oracle import PropertyReport, run_property_suite
from .quadrature import frac_integral, gauss_jacobi_rule, iterated_integral
from .specialfn import beta, gamma, log_gamma, recip_gamma

__version__ = "0.1.0"

__all__ = [
    "BasePointError",
    "CausalFunction",
    "DomainError",
    "FracCalcError",
    "InvalidWeight",
    "MixedBasePoints",
    "NonIntegrableDerivative",
    "OperatorResult",
    "Order",
    "OrderError",
    "ParseError",
    "PoleError",
    "PropertyReport",
    "UnsupportedOrder",
    "apply",
    "beta",
    "commutation_residual",
    "constant",
    "correspondence_check",
    "differentiate",
    "evaluate",
    "frac_integral",
    "gamma",
    "gauss_jacobi_rule",
    "iterated_integral",
    "left_derivative",
    "linear_combine",
    "log_gamma",
    "monomial",
    "parse",
    "recip_gamma",
    "right_derivative",
    "run_property_suite",
    "semigroup_check",
    "semigroup_residual",
    "try_closed_form",
]
