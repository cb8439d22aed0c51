"""Custom exceptions for the rational telescoper engine."""

from typing import Optional, Tuple, Union


class TelescopingError(Exception):
    """Base exception class for the rational telescoper engine."""

    pass


class ZeroDenominatorError(TelescopingError):
    """Raised when a rational function is built with a zero denominator."""

    pass


class BadFactorizationError(TelescopingError):
    """Raised when a supplied factorization does not match a denominator."""

    pass


class NotCoprimeError(TelescopingError):
    """Raised when two polynomials expected to be coprime share a factor."""

    pass


class KindMismatchError(TelescopingError):
    """Raised when Ore operators of different kinds are combined."""

    pass


class ZeroDivisorError(TelescopingError):
    """Raised on right division by the zero operator."""

    pass


class FactorizationRequiredError(TelescopingError):
    """Raised when a denominator factor of higher degree was not supplied factored."""

    pass


class ExpressionSyntaxError(TelescopingError):
    """Raised when an input expression cannot be parsed."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


class ValidationError(TelescopingError):
    """Raised when asserted denominator factors fail validation."""

    def __init__(self, message: str, pair: Optional[Tuple[str, str]] = None) -> None:
        super().__init__(message)
        self.pair = pair


class BoundExceededError(TelescopingError):
    """Raised when a bounded solver exhausts its ansatz."""

    def __init__(self, message: str, bound: Union[str, Tuple[int, ...]]) -> None:
        super().__init__(message)
        self.bound = bound


class VerificationError(TelescopingError):
    """Raised when an internally produced identity fails to verify."""

    pass
