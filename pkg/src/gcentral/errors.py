"""Exception types shared across the package.

Each maps to a CLI exit code: input problems exit 2, enumeration budget
overruns exit 3, numerical failures exit 4.
"""

from __future__ import annotations


class GCentralError(Exception):
    """Base class for all package-specific errors."""


class InputError(GCentralError):
    """Malformed or semantically invalid input (edge lists, labels, sets)."""


class BudgetExceededError(GCentralError):
    """Subset enumeration would exceed the configured budget."""

    def __init__(self, message: str, subsets: int):
        super().__init__(message)
        self.subsets = subsets


class NumericalError(GCentralError):
    """A linear solve or factorization failed its residual check."""


class TruncationError(GCentralError):
    """Too many Monte-Carlo walks hit the step cap to trust the averages."""

    def __init__(self, message: str, truncated: int, total: int):
        super().__init__(message)
        self.truncated = truncated
        self.total = total


class SamplingBudgetError(GCentralError):
    """Random-walk sampling ran out of steps before reaching its target."""

    def __init__(self, message: str, distinct_visited: int):
        super().__init__(message)
        self.distinct_visited = distinct_visited
