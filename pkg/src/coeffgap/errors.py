"""Exception hierarchy shared by every module."""


class CoeffGapError(ValueError):
    """Base class for all errors raised by this package."""


class DegenerateOrderError(CoeffGapError):
    """A series is too short for the requested operation."""


class NormalizationError(CoeffGapError):
    """A series does not carry the required leading coefficients."""


class MeasureError(CoeffGapError):
    """Invalid atomic Herglotz measure."""


class LengthError(CoeffGapError):
    """A coefficient list is shorter than the operation needs."""


class ChartDegenerateError(CoeffGapError):
    """The (p, x, y) chart is undefined at |p1| = 2."""


class FeasibilityError(CoeffGapError):
    """A coefficient prefix does not belong to a Caratheodory function."""


class DomainError(CoeffGapError):
    """An argument lies outside the domain where a formula is valid."""


class EvaluationError(CoeffGapError):
    """An objective returned a non-finite value during optimization."""

    def __init__(self, message, argument=None):
        super().__init__(message)
        self.argument = argument


class CoefficientIndexError(CoeffGapError, IndexError):
    """A coefficient index outside the admissible range."""
