"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "TailBoundsError",
    "InvalidInput",
    "InvalidBracket",
    "DomainError",
    "NonConvergence",
]


class TailBoundsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(TailBoundsError, ValueError):
    """An argument fails a precondition (wrong sign, non-finite, malformed)."""


class InvalidBracket(TailBoundsError, ValueError):
    """A bracketing interval does not enclose a root or is empty."""


class DomainError(TailBoundsError, ValueError):
    """A parameter lies outside the mathematical domain of the operation."""


class NonConvergence(TailBoundsError, RuntimeError):
    """An iterative routine exhausted its budget before meeting tolerance."""
