"""Parameter domain of the half-space Hardy inequality.

The inequality is parametrized by a dimension N >= 1, an integrability
exponent 1 <= p < inf and a differentiability order 0 < s < 1 with the
critical line p*s = 1 excluded.  The derived exponent

    alpha = (1 - p*s) / p

is the power of the virtual ground state omega(t) = t**(-alpha).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import (
    CriticalCaseError,
    InvalidDimensionError,
    InvalidExponentPError,
    InvalidOrderSError,
)

#: Rejection band half-width around p*s = 1.
CRITICAL_GUARD = 1e-9


class Regime(enum.Enum):
    """Which side of the critical line p*s = 1 the parameters lie on."""

    SUBCRITICAL = "subcritical"      # p*s < 1, boundary contact allowed
    SUPERCRITICAL = "supercritical"  # p*s > 1, functions vanish at the boundary


@dataclass(frozen=True)
class HardyParams:
    """Validated parameter triple with derived quantities.

    Instances are immutable; build them through :func:`make_params`.
    """

    dim: int
    p: float
    s: float
    alpha: float
    regime: Regime

    @property
    def ps(self) -> float:
        return self.p * self.s

    def with_dim(self, dim: int) -> "HardyParams":
        return make_params(dim, self.p, self.s)

    def __str__(self) -> str:
        return f"(N={self.dim}, p={self.p:g}, s={self.s:g})"


def make_params(dim: int, p: float, s: float, guard: float = CRITICAL_GUARD) -> HardyParams:
    """Validate (N, p, s) and derive alpha and the regime flag.

    Raises a distinct error for each rejected hypothesis: N < 1 or
    non-integer, p < 1, s outside (0, 1), and |p*s - 1| < guard.
    """
    if not isinstance(dim, (int,)) or isinstance(dim, bool) or dim < 1:
        raise InvalidDimensionError(f"dimension must be a positive integer, got {dim!r}")
    p = float(p)
    s = float(s)
    if not math.isfinite(p) or p < 1.0:
        raise InvalidExponentPError(f"p must satisfy 1 <= p < inf, got {p!r}")
    if not (0.0 < s < 1.0):
        raise InvalidOrderSError(f"s must lie in (0, 1), got {s!r}")
    ps = p * s
    if abs(ps - 1.0) < guard:
        raise CriticalCaseError(
            f"p*s = {ps!r} lies within {guard:g} of the excluded critical value 1"
        )
    alpha = (1.0 - ps) / p
    regime = Regime.SUBCRITICAL if ps < 1.0 else Regime.SUPERCRITICAL
    return HardyParams(dim=dim, p=p, s=s, alpha=alpha, regime=regime)


def ground_state_exponent(params: HardyParams) -> float:
    """Exponent alpha of the ground state omega(t) = t**(-alpha)."""
    return params.alpha
