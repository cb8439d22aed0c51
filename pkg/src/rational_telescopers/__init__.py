"""Rational telescoper engine."""

from .core.existence import TelescoperType, decide, verify_telescoper
from .core.exactness import is_exact
from .core.operators import OrePoly
from .core.solvers import SolverBounds
from .core.verdicts import Reason, Verdict
from .exceptions.telescoping_exceptions import (
    BadFactorizationError,
    ExpressionSyntaxError,
    FactorizationRequiredError,
    TelescopingError,
    ValidationError,
    VerificationError,
)

__version__ = "1.0.0"

__all__ = [
    "TelescoperType",
    "decide",
    "verify_telescoper",
    "is_exact",
    "OrePoly",
    "SolverBounds",
    "Reason",
    "Verdict",
    "TelescopingError",
    "BadFactorizationError",
    "ExpressionSyntaxError",
    "FactorizationRequiredError",
    "ValidationError",
    "VerificationError",
]
