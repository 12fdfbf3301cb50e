"""
Exception hierarchy for fato.

Input and precondition problems derive from ValueError, numerical failures
from ArithmeticError. The CLI maps the first family to exit code 2 and the
second to exit code 3.
"""

from typing import Optional


class FatoError(Exception):
    """Base class for every error raised by fato."""


class ValidationError(FatoError, ValueError):
    """An input violates a documented precondition."""


class NumericalFailure(FatoError, ArithmeticError):
    """A numerical procedure did not reach its accuracy target."""


class NonUnitAxis(ValidationError):
    pass


class DimMismatch(ValidationError):
    pass


class NonUnitary(ValidationError):
    pass


class NonPositiveInput(ValidationError):
    pass


class ThetaMismatch(ValidationError):
    pass


class ParityMismatch(ValidationError):
    pass


class WeakRegime(ValidationError):
    """Strong-driving construction requested with theta <= pi/4."""


class StrongRegime(ValidationError):
    """RWA quantity requested with theta > pi/4."""


class EmptySequence(ValidationError):
    pass


class OutOfDomain(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class NotFound(NumericalFailure):
    """No bang pattern reached the requested tolerance."""

    def __init__(self, message: str, best_residual: float, best_sequence=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.best_sequence = best_sequence


class NoConvergence(NumericalFailure):
    """Step refinement cap reached without meeting the Richardson tolerance."""

    def __init__(self, message: str, defect: Optional[float] = None):
        super().__init__(message)
        self.defect = defect


class QuadratureBudgetExceeded(NumericalFailure):
    pass


class ConstructionFailed(NumericalFailure):
    pass
