"""Exception types shared across the package."""

from __future__ import annotations


class WplinkError(Exception):
    """Base class for all package-specific errors."""


class DomainError(WplinkError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class ConvergenceError(WplinkError, ArithmeticError):
    """An iterative routine failed to reach its accuracy contract."""


class OptimizationError(WplinkError, RuntimeError):
    """A search found no admissible point in its bracket."""
