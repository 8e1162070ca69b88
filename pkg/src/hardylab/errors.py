"""Exception types shared across the package."""

from __future__ import annotations


class HardyLabError(Exception):
    """Base class for all package errors."""


class ParameterError(HardyLabError, ValueError):
    """A parameter triple (N, p, s) violates the hypotheses."""


class InvalidDimensionError(ParameterError):
    """N is not a positive integer."""


class InvalidExponentPError(ParameterError):
    """p is outside [1, inf)."""


class InvalidOrderSError(ParameterError):
    """s is outside the open interval (0, 1)."""


class CriticalCaseError(ParameterError):
    """p*s falls inside the excluded band around 1."""


class QuadratureError(HardyLabError):
    """Invalid quadrature request (bad exponents, empty interval, ...)."""


class NonConvergenceError(HardyLabError, RuntimeError):
    """Refinement budget exhausted before the tolerance was met.

    Carries the best estimate so callers can still inspect it.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InadmissibleFunctionError(HardyLabError, ValueError):
    """A profile fails the admissibility conditions for the requested parameters."""
