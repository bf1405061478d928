"""Exception types raised across the package."""


class BoundsError(Exception):
    """Base class for all package errors."""


class DomainError(BoundsError, ValueError):
    """An argument lies outside the domain of a formula."""


class TableRangeError(BoundsError, ValueError):
    """A lookup fell outside the range covered by a table."""


class PreconditionError(BoundsError):
    """A strict precheck failed before evaluating the bound."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotFoundError(BoundsError):
    """A search exhausted its range without finding an admissible value."""


class InfeasibleError(BoundsError):
    """No admissible parameter exists for the requested configuration."""


class BudgetExhausted(BoundsError):
    """A scan ran out of budget; the result is inconclusive."""


class CapExceeded(BoundsError, ValueError):
    """A request exceeds the configured sieve memory cap."""
