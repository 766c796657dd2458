"""Exception hierarchy for budgeted chore allocation."""
from __future__ import annotations

from typing import Sequence


class ChoreDivisionError(Exception):
    """Base class for every error raised by this package."""


class InstanceValidationError(ChoreDivisionError, ValueError):
    """Raised when instance data violates the model's requirements."""


class NonPositiveSize(InstanceValidationError):
    pass


class NegativeDisutility(InstanceValidationError):
    pass


class NonPositiveBudget(InstanceValidationError):
    pass


class DimensionMismatch(InstanceValidationError):
    pass


class InvalidAllocation(InstanceValidationError):
    """Bundles that do not partition the chores, or a malformed fraction matrix."""


class IndexOutOfRange(ChoreDivisionError, IndexError):
    pass


class WrongAgentCount(ChoreDivisionError, ValueError):
    pass


class IntractableError(ChoreDivisionError):
    """Raised when an exact search would exceed the configured limits."""


class VerificationIntractable(IntractableError):
    pass


class OracleTooLarge(IntractableError):
    pass


class CounterSearchExhausted(ChoreDivisionError):
    """The divisible solver reached counters it cannot raise while budgets still cannot be met exactly.

    ``tau`` holds the counters the search stopped at.
    """

    def __init__(self, tau: Sequence[int]):
        self.tau = tuple(tau)
        super().__init__(
            f"no counter can be raised from tau={self.tau} and the budgets cannot be met exactly"
        )


class InternalInvariantViolation(ChoreDivisionError, RuntimeError):
    """A proven property failed to hold; indicates a bug rather than bad input."""


__all__ = [
    "ChoreDivisionError",
    "InstanceValidationError",
    "NonPositiveSize",
    "NegativeDisutility",
    "NonPositiveBudget",
    "DimensionMismatch",
    "InvalidAllocation",
    "IndexOutOfRange",
    "WrongAgentCount",
    "IntractableError",
    "VerificationIntractable",
    "OracleTooLarge",
    "CounterSearchExhausted",
    "InternalInvariantViolation",
]
