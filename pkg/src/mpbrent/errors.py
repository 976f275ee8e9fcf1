"""Exception hierarchy shared by all mpbrent modules."""


class MPError(ArithmeticError):
    """Base class for mpbrent arithmetic failures."""


class ExponentOverflow(MPError, OverflowError):
    """The binary exponent left the signed 64-bit range."""


class DivisionByZero(MPError, ZeroDivisionError):
    pass


class DomainError(MPError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class RangeError(MPError):
    """Argument valid, but the requested path or result range is not."""


class ConvergenceError(MPError):
    """An iteration hit its cap.  ``trail`` holds diagnostic records."""

    def __init__(self, message, trail=()):
        super().__init__(message)
        self.trail = list(trail)


class DegenerateSecantError(ConvergenceError):
    pass


class CapabilityError(MPError):
    """A solver needs derivative callables that the oracle lacks."""


class EmptyReportError(MPError):
    pass


class NormalizationError(MPError, ValueError):
    """A power-series operation got a constant term it does not accept."""
