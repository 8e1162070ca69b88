"""Numerical integration engine.

Four families of operations:

* :func:`integrate_graded` -- 1D integrals with algebraic endpoint
  singularities, handled by composite Gauss-Legendre panels on geometric
  meshes graded toward declared singular endpoints, plus an analytic
  power-law completion of the sliver between the finest mesh node and the
  endpoint.
* :func:`principal_value_halfline` -- symmetric-excision principal values
  on (0, tail_cut), realized by pairing y = x0 +/- t so the odd singular
  part cancels exactly before any quadrature.
* :func:`integrate_2d_offdiagonal` -- symmetric double integrals with a
  diagonal singularity, reduced to the triangle x < y and integrated in
  (x, t = y - x) coordinates with a t-graded outer mesh.
* :func:`monte_carlo_integral` -- seeded, chunk-deterministic plain Monte
  Carlo on a box.

All error estimates are a-posteriori: the difference between the last two
refinement levels.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import NonConvergenceError, QuadratureError

__all__ = [
    "QuadConfig",
    "EnergyReport",
    "Location",
    "SingularityDescriptor",
    "integrate_graded",
    "principal_value_halfline",
    "pv_excision_values",
    "integrate_2d_offdiagonal",
    "monte_carlo_integral",
]


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and mesh parameters shared by all quadrature routines."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_refinements: int = 30
    grading_ratio: float = 0.5
    panel_order: int = 16

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise QuadratureError("tolerances must be strictly positive")
        if not (0.0 < self.grading_ratio < 1.0):
            raise QuadratureError("grading_ratio must lie in (0, 1)")
        if self.max_refinements < 1 or self.panel_order < 1:
            raise QuadratureError("max_refinements and panel_order must be >= 1")

    def scaled(self, rel_factor: float = 1.0, abs_factor: float = 1.0) -> "QuadConfig":
        return QuadConfig(
            rel_tol=self.rel_tol * rel_factor,
            abs_tol=self.abs_tol * abs_factor,
            max_refinements=self.max_refinements,
            grading_ratio=self.grading_ratio,
            panel_order=self.panel_order,
        )


#: Default configuration for 1D quadratures.
DEFAULT_1D = QuadConfig()
#: Looser default for double integrals (each evaluation is itself an integral).
DEFAULT_2D = QuadConfig(rel_tol=1e-4)


@dataclass(frozen=True)
class EnergyReport:
    """A computed integral with an a-posteriori error bound."""

    value: float
    error_estimate: float
    evaluations: int
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __add__(self, other: "EnergyReport") -> "EnergyReport":
        return EnergyReport(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            evaluations=self.evaluations + other.evaluations,
        )

    def scale(self, c: float) -> "EnergyReport":
        return EnergyReport(
            value=c * self.value,
            error_estimate=abs(c) * self.error_estimate,
            evaluations=self.evaluations,
            diagnostics=dict(self.diagnostics),
        )


class Location(enum.Enum):
    LEFT_ENDPOINT = "left"
    RIGHT_ENDPOINT = "right"


@dataclass(frozen=True)
class SingularityDescriptor:
    """Declared algebraic behavior f ~ C * distance**exponent at an endpoint."""

    location: Location
    exponent: float

    def __post_init__(self):
        if not self.exponent > -1.0:
            raise QuadratureError(
                f"singularity exponent must exceed -1 for integrability, got {self.exponent!r}"
            )


@lru_cache(maxsize=32)
def gauss_legendre(order: int):
    """Nodes and weights on [0, 1], cached per order."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


# ---------------------------------------------------------------------------
# graded 1D quadrature
# ---------------------------------------------------------------------------

_DEPTH_BASE = 10
_DEPTH_STEP = 6
_TINY_EDGE = 1e-280


def _segment_edges(a: float, b: float, breakpoints: Sequence[float]) -> list:
    pts = sorted({float(c) for c in breakpoints if a < c < b})
    return [a, *pts, b]


def _graded_points(length: float, ratio: float, depth: int) -> np.ndarray:
    """Distances 0 < length*ratio**depth < ... < length from a singular endpoint."""
    k = np.arange(depth, -1, -1, dtype=float)
    return length * ratio**k


def _panel_sums(f, panels: np.ndarray, order: int):
    """Integrate f over each [lo, hi] panel row with one vectorized call."""
    xs, ws = gauss_legendre(order)
    lo = panels[:, 0][:, None]
    hi = panels[:, 1][:, None]
    nodes = lo + (hi - lo) * xs[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    if not np.all(np.isfinite(vals)):
        bad = nodes.ravel()[~np.isfinite(vals.ravel())][:3]
        raise QuadratureError(f"integrand not finite at nodes {bad.tolist()}")
    return float(np.sum((hi - lo) * vals @ ws)), nodes.size


def _stub_integral(f, edge: float, side: int, delta: float, gamma: float):
    """Power-law completion of int over the sliver of width delta at an endpoint.

    Fits f ~ C * dist**gamma at two interior sample distances; exact whenever
    the integrand is a pure power there, which the declared exponent promises
    in the limit.
    """
    t1 = 0.4 * delta
    t2 = 0.8 * delta
    x1 = edge + side * t1
    x2 = edge + side * t2
    f1, f2 = float(f(np.array([x1]))[0]), float(f(np.array([x2]))[0])
    if not (math.isfinite(f1) and math.isfinite(f2)):
        raise QuadratureError(f"integrand not finite near endpoint {edge!r}")
    c1 = f1 * t1**-gamma if f1 != 0.0 else 0.0
    c2 = f2 * t2**-gamma if f2 != 0.0 else 0.0
    coeff = 0.5 * (c1 + c2)
    return coeff * delta ** (1.0 + gamma) / (1.0 + gamma), 2


def _build_level(a, b, edges, left, right, cfg, level):
    """Panel table for one refinement level; returns (panels, stubs)."""
    depth = _DEPTH_BASE + _DEPTH_STEP * level
    ratio = cfg.grading_ratio
    smooth_n = 1 + level
    panels = []
    stubs = []  # (edge, side, delta, exponent)
    for i in range(len(edges) - 1):
        lo, hi = edges[i], edges[i + 1]
        length = hi - lo
        grade_left = left is not None and i == 0
        grade_right = right is not None and i == len(edges) - 2
        if grade_left and grade_right:
            mid = 0.5 * (lo + hi)
            _grade_into(panels, stubs, lo, mid - lo, +1, left.exponent, ratio, depth)
            _grade_into(panels, stubs, hi, hi - mid, -1, right.exponent, ratio, depth)
        elif grade_left:
            _grade_into(panels, stubs, lo, length, +1, left.exponent, ratio, depth)
        elif grade_right:
            _grade_into(panels, stubs, hi, length, -1, right.exponent, ratio, depth)
        else:
            cuts = np.linspace(lo, hi, smooth_n + 1)
            panels.extend(zip(cuts[:-1], cuts[1:]))
    return np.array(panels, dtype=float), stubs


def _grade_into(panels, stubs, edge, length, side, exponent, ratio, depth):
    """Append geometric panels toward `edge` plus the terminal stub record."""
    # Cap the depth so nodes stay representable next to a nonzero endpoint.
    floor_dist = max(_TINY_EDGE, 64.0 * np.finfo(float).eps * abs(edge))
    max_depth = int(math.floor(math.log(max(length / floor_dist, 2.0)) / math.log(1.0 / ratio)))
    depth = min(depth, max_depth)
    dists = _graded_points(length, ratio, depth)
    pts = edge + side * dists
    if side > 0:
        pairs = list(zip(pts[:-1], pts[1:]))
    else:
        pairs = list(zip(pts[1:][::-1], pts[:-1][::-1]))
    panels.extend(pairs)
    stubs.append((edge, side, float(dists[0]), exponent))


def _split_singularities(singularities):
    left = right = None
    for s in singularities:
        if s.location is Location.LEFT_ENDPOINT:
            if left is not None:
                raise QuadratureError("duplicate left singularity descriptor")
            left = s
        else:
            if right is not None:
                raise QuadratureError("duplicate right singularity descriptor")
            right = s
    return left, right


def integrate_graded(
    f: Callable,
    a: float,
    b: float,
    singularities: Sequence[SingularityDescriptor] = (),
    cfg: QuadConfig = DEFAULT_1D,
    breakpoints: Sequence[float] = (),
) -> EnergyReport:
    """Integrate f over (a, b) with declared algebraic endpoint singularities.

    f must accept numpy arrays and is never evaluated at a or b.  Refinement
    deepens the graded meshes and subdivides smooth panels until the last two
    levels agree within max(rel_tol*|I|, abs_tol).

    Raises NonConvergenceError (carrying the best estimate) if the budget is
    exhausted, and QuadratureError for invalid requests.
    """
    a, b = float(a), float(b)
    if not (a < b) or not math.isfinite(a) or not math.isfinite(b):
        raise QuadratureError(f"need finite a < b, got ({a!r}, {b!r})")
    left, right = _split_singularities(singularities)
    edges = _segment_edges(a, b, breakpoints)

    previous = None
    evals = 0
    best = None
    for level in range(cfg.max_refinements + 1):
        panels, stubs = _build_level(a, b, edges, left, right, cfg, level)
        total, n = _panel_sums(f, panels, cfg.panel_order)
        evals += n
        for edge, side, delta, gamma in stubs:
            sv, sn = _stub_integral(f, edge, side, delta, gamma)
            total += sv
            evals += sn
        if previous is not None:
            err = abs(total - previous)
            best = EnergyReport(value=total, error_estimate=err, evaluations=evals)
            if err <= max(cfg.rel_tol * abs(total), cfg.abs_tol):
                return best
        previous = total
    raise NonConvergenceError(
        f"integrate_graded: no convergence after {cfg.max_refinements} refinements "
        f"(last estimate {previous!r})",
        report=best,
    )


# ---------------------------------------------------------------------------
# principal values on the half-line
# ---------------------------------------------------------------------------


def principal_value_halfline(
    g: Callable,
    x0: float,
    tail_cut: float,
    cfg: QuadConfig = DEFAULT_1D,
    *,
    pair_exponent: float = 0.0,
    origin_exponent: float = 0.0,
    decay_exponent: float | None = None,
) -> EnergyReport:
    """Symmetric-excision principal value of int_(0, tail_cut) g(y) dy at y = x0.

    The core (x0 - d, x0 + d) is folded to int_0^d [g(x0+t) + g(x0-t)] dt so
    the odd 1/t part cancels in exact arithmetic; the even remainder behaves
    like t**pair_exponent and is integrated on a graded mesh.  origin_exponent
    declares the behavior of g at y -> 0+.  With tail_cut = inf the far field
    is mapped to a finite interval by y = 1/w, which requires the power decay
    g ~ C*y**decay_exponent (decay_exponent < -1); no truncation error is
    introduced.
    """
    x0 = float(x0)
    if not x0 > 0.0:
        raise QuadratureError(f"principal value point must be positive, got {x0!r}")
    infinite_tail = math.isinf(tail_cut)
    if infinite_tail:
        if decay_exponent is None or not decay_exponent < -1.0:
            raise QuadratureError("tail_cut = inf requires decay_exponent < -1")
        delta = 0.5 * x0
    else:
        if not tail_cut > x0:
            raise QuadratureError("tail_cut must exceed x0")
        delta = 0.5 * min(x0, tail_cut - x0)

    def paired(t):
        return g(x0 + t) + g(x0 - t)

    core = integrate_graded(
        paired,
        0.0,
        delta,
        [SingularityDescriptor(Location.LEFT_ENDPOINT, pair_exponent)],
        cfg,
    )
    lower = integrate_graded(
        g,
        0.0,
        x0 - delta,
        [SingularityDescriptor(Location.LEFT_ENDPOINT, origin_exponent)],
        cfg,
    )
    if not infinite_tail:
        upper = integrate_graded(g, x0 + delta, tail_cut, [], cfg)
        return core + lower + upper

    x1 = 2.0 * (x0 + delta)
    near = integrate_graded(g, x0 + delta, x1, [], cfg)

    def inverted(w):
        return g(1.0 / w) / w**2

    far = integrate_graded(
        inverted,
        0.0,
        1.0 / x1,
        [SingularityDescriptor(Location.LEFT_ENDPOINT, -decay_exponent - 2.0)],
        cfg,
    )
    return core + lower + near + far


def pv_excision_values(
    g: Callable,
    x0: float,
    tail_cut: float,
    cfg: QuadConfig = DEFAULT_1D,
    eps_sequence: Sequence[float] = (0.1, 0.05, 0.025, 0.0125),
) -> list:
    """Diagnostic cross-check: raw excised integrals for a shrinking epsilon.

    Returns [(eps, value), ...]; the sequence should approach the paired
    principal value as eps -> 0.
    """
    out = []
    for eps in eps_sequence:
        if not (0.0 < eps < min(x0, tail_cut - x0)):
            raise QuadratureError(f"eps {eps!r} incompatible with excision at {x0!r}")
        low = integrate_graded(g, 0.0, x0 - eps, [], cfg, breakpoints=[x0 / 2])
        high = integrate_graded(g, x0 + eps, tail_cut, [], cfg)
        out.append((eps, low.value + high.value))
    return out


# ---------------------------------------------------------------------------
# symmetric 2D integrals with a diagonal singularity
# ---------------------------------------------------------------------------


def integrate_2d_offdiagonal(
    F: Callable,
    diag_exponent: float,
    L: float,
    cfg: QuadConfig = DEFAULT_2D,
    *,
    x_breakpoints: Sequence[float] = (),
    t_breakpoints: Sequence[float] = (),
    x_left_exponent: float | None = None,
) -> EnergyReport:
    """Integrate a symmetric F over (0, L)^2 with |F| ~ |x-y|**diag_exponent.

    Computes 2 * int_{0<x<y<L} F dx dy in the coordinates (x, t = y - x):

        2 * int_0^L dt int_0^{L-t} F(x, x+t) dx

    with a geometric mesh in t toward the diagonal t = 0.  Optional hints:
    x_breakpoints are structure points of F in each slice (they and their
    t-shifts split the inner mesh), and x_left_exponent declares an algebraic
    singularity of the slice integrand at x = 0.
    """
    if not diag_exponent > -1.0:
        raise QuadratureError("diag_exponent must exceed -1")
    L = float(L)
    if not L > 0.0:
        raise QuadratureError("L must be positive")
    xbreaks = sorted({float(c) for c in x_breakpoints if 0.0 < c < L})

    evals = 0

    def slice_integral(t: float, level: int) -> float:
        nonlocal evals
        width = L - t
        if width <= 0.0:
            return 0.0
        cuts = {0.0, width}
        for c in xbreaks:
            if 0.0 < c < width:
                cuts.add(c)
            if 0.0 < c - t < width:
                cuts.add(c - t)
        edges = sorted(cuts)
        panels = []
        stubs = []
        n_sub = 2 + level
        for i in range(len(edges) - 1):
            lo, hi = edges[i], edges[i + 1]
            if i == 0 and x_left_exponent is not None:
                _grade_into(
                    panels, stubs, lo, hi - lo, +1, x_left_exponent,
                    cfg.grading_ratio, _DEPTH_BASE + 4 * level,
                )
            else:
                sub = np.linspace(lo, hi, n_sub + 1)
                panels.extend(zip(sub[:-1], sub[1:]))
        panel_arr = np.array(panels, dtype=float)

        def fx(xv):
            return F(xv, xv + t)

        total, n = _panel_sums(fx, panel_arr, cfg.panel_order)
        evals += n
        for edge, side, delta, gamma in stubs:
            sv, sn = _stub_integral(fx, edge, side, delta, gamma)
            total += sv
            evals += sn
        return total

    tbreaks = sorted({float(c) for c in t_breakpoints if 0.0 < c < L})
    previous = None
    best = None
    for level in range(cfg.max_refinements + 1):
        def outer(ts, _level=level):
            flat = np.atleast_1d(np.asarray(ts, dtype=float)).ravel()
            return np.array([slice_integral(t, _level) for t in flat])

        edges = [0.0, *tbreaks, L]
        panels, stubs = _build_level(
            0.0, L, edges,
            SingularityDescriptor(Location.LEFT_ENDPOINT, diag_exponent), None,
            cfg, level,
        )
        total, _ = _panel_sums(outer, panels, cfg.panel_order)
        for edge, side, delta, gamma in stubs:
            sv, _ = _stub_integral(outer, edge, side, delta, gamma)
            total += sv
        total *= 2.0
        if previous is not None:
            err = abs(total - previous)
            best = EnergyReport(value=total, error_estimate=err, evaluations=evals)
            if err <= max(cfg.rel_tol * abs(total), cfg.abs_tol):
                return best
        previous = total
    raise NonConvergenceError(
        f"integrate_2d_offdiagonal: no convergence after {cfg.max_refinements} refinements",
        report=best,
    )


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

_MC_CHUNK = 1 << 19


def monte_carlo_integral(
    F: Callable,
    box: Sequence[Sequence[float]],
    samples: int,
    seed: int,
) -> EnergyReport:
    """Plain Monte Carlo estimate of int_box F with a seeded PCG64 stream.

    The value is volume * mean(F), the error estimate is the sample standard
    error of that mean.  Samples are drawn in fixed-size chunks in a fixed
    order, so identical (seed, samples, box, F) reproduce bit-identical
    reports regardless of available memory.
    """
    if samples < 1:
        raise QuadratureError("samples must be a positive integer")
    box_arr = np.asarray(box, dtype=float)
    if box_arr.ndim != 2 or box_arr.shape[0] == 0 or box_arr.shape[1] != 2:
        raise QuadratureError("box must be a nonempty list of (lo, hi) intervals")
    widths = box_arr[:, 1] - box_arr[:, 0]
    if np.any(widths <= 0.0):
        raise QuadratureError("every box interval needs hi > lo")
    volume = float(np.prod(widths))
    dim = box_arr.shape[0]

    rng = np.random.Generator(np.random.PCG64(seed))
    s1 = 0.0
    s2 = 0.0
    done = 0
    while done < samples:
        m = min(_MC_CHUNK, samples - done)
        u = rng.random((m, dim))
        pts = box_arr[:, 0] + u * widths
        vals = np.asarray(F(pts), dtype=float)
        s1 += float(np.sum(vals))
        s2 += float(np.sum(vals * vals))
        done += m
    mean = s1 / samples
    if samples > 1:
        var = max(s2 - samples * mean * mean, 0.0) / (samples - 1)
        stderr = volume * math.sqrt(var / samples)
    else:
        stderr = math.inf
    return EnergyReport(value=volume * mean, error_estimate=stderr, evaluations=samples)
