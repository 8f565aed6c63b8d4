"""Exception hierarchy shared by all modules."""


class IsingSeriesError(Exception):
    """Base class for every error raised by this package."""


class VariableMismatch(IsingSeriesError):
    pass


class ZeroLeadingCoefficient(IsingSeriesError):
    pass


class NonIntegerExponent(IsingSeriesError):
    pass


class IrrationalLeadingScale(IsingSeriesError):
    pass


class InvalidValuation(IsingSeriesError):
    pass


class OrderTooSmall(IsingSeriesError):
    pass


class ResourceBudgetExceeded(IsingSeriesError):
    """The frontier grew beyond the configured state cap."""


class WindowTooLarge(IsingSeriesError):
    pass


class NotAPolynomial(IsingSeriesError):
    pass


class InsufficientOrder(IsingSeriesError):
    pass


class NoPolynomialFit(IsingSeriesError):
    """No polynomial of degree at most ``len(points) - 2`` fits the data."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or []


class UnknownLabel(IsingSeriesError, KeyError):
    def __str__(self):
        return f"unknown label {self.args[0]!r}" if self.args else "unknown label"


class OutOfRange(IsingSeriesError, ValueError):
    pass
