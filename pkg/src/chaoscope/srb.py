"""Numerical evidence for or against an absolutely continuous invariant
measure at a given interval-family parameter: invariant-density histograms,
time averages, and a combined classification mirroring the attracting-cycle
versus stochastic-like dichotomy.

The sampling orbit starts at the critical value.  In 64-bit arithmetic that
orbit can collapse onto an exactly periodic float cycle; when the captured
cycle is superstable (contains the turning point) or attracting, the finite
support is the honest answer and is returned flagged.  When the captured
cycle is repelling the collapse is a float artifact (the true dynamics leave
it), so the orbit restarts once from the nearest distinct double below the
critical value and the restart is flagged.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import _kernels
from ._kernels import STATUS_ESCAPED, STATUS_OK
from .cycles import Stability, find_cycle_by_convergence
from .lyapunov import ExponentClass, classify_exponent
from .maps import ESCAPE_RADIUS, QuadraticParams, invariant_interval

DEFAULT_ITERATIONS = 10**6
DEFAULT_BURN_IN = 10**4
DEFAULT_BINS = 100
SUPPORT_THRESHOLD = 0.5
# a bin counts toward the effective support when it carries at least this
# fraction of the uniform share
SUPPORT_MASS_FLOOR = 0.05


class SrbEvidence(enum.Enum):
    PERIODIC_ATTRACTOR = "periodic_attractor"
    STOCHASTIC_LIKE = "stochastic_like"
    ESCAPED = "escaped"
    UNDETERMINED = "undetermined"


class EscapedOrbitError(RuntimeError):
    """The sampling orbit left the escape radius."""


@dataclass
class DensityHistogram:
    """Normalized histogram of the sampling orbit over the invariant
    interval.  Masses sum to one; flags record degenerate orbits."""

    bins: int
    support: Tuple[float, float]
    mass: np.ndarray
    sample_count: int
    hit_critical: bool = False
    restarted: bool = False
    capture_period: int = 0

    def effective_support_fraction(self) -> float:
        floor = SUPPORT_MASS_FLOOR / self.bins
        return float(np.count_nonzero(self.mass > floor)) / self.bins


def _capture_cycle(a: float, x_at_capture: float, period: int):
    """The exact float cycle the orbit collapsed onto, and its multiplier."""
    pts = []
    x = x_at_capture
    for _ in range(period):
        pts.append(x)
        x = 1.0 - a * (x * x)
    log_mult = 0.0
    superstable = False
    for xp in pts:
        f = abs(-2.0 * a * xp)
        if f == 0.0:
            superstable = True
            break
        log_mult += math.log(f)
    return pts, log_mult, superstable


def _orbit_samples(p: QuadraticParams, iterations: int, burn_in: int):
    """Post-burn-in orbit samples with exact-capture handling.

    Returns (samples, hit_critical, restarted, capture_period).
    """
    if iterations < 10**4:
        raise ValueError("iterations must be >= 10^4")
    a = p.a
    start = 1.0
    restarted = False
    for attempt in range(2):
        samples, filled, status, cap_step, cap_period, cap_value = _kernels.quad_orbit_collect(
            a, start, burn_in, iterations, ESCAPE_RADIUS
        )
        if status == STATUS_ESCAPED:
            raise EscapedOrbitError(f"orbit escaped at a={a}")
        if cap_step < 0:
            return samples, False, restarted, 0
        pts, log_mult, superstable = _capture_cycle(a, cap_value, cap_period)
        if superstable or log_mult <= 0.0:
            # genuine attractor (or the turning point itself): finite support
            # is the correct empirical measure
            return samples, superstable, restarted, cap_period
        if attempt == 0:
            start = math.nextafter(start, 0.0)
            restarted = True
    # a second repelling capture: keep the samples, flags tell the story
    return samples, False, restarted, cap_period


def estimate_density(
    p: QuadraticParams,
    iterations: int = DEFAULT_ITERATIONS,
    burn_in: int = DEFAULT_BURN_IN,
    bins: int = DEFAULT_BINS,
) -> DensityHistogram:
    """Histogram of the sampling orbit over the invariant interval,
    normalized to unit mass.  Deterministic for fixed arguments."""
    samples, hit_critical, restarted, cap_period = _orbit_samples(p, iterations, burn_in)
    lo, hi = invariant_interval(p)
    counts, _ = np.histogram(samples, bins=bins, range=(lo, hi))
    return DensityHistogram(
        bins=bins,
        support=(lo, hi),
        mass=counts / samples.size,
        sample_count=samples.size,
        hit_critical=hit_critical,
        restarted=restarted,
        capture_period=cap_period,
    )


def birkhoff_average(
    p: QuadraticParams,
    observable: str = "identity",
    iterations: int = DEFAULT_ITERATIONS,
    burn_in: int = DEFAULT_BURN_IN,
) -> float:
    """Time average of the observable ('identity' or 'square') along the
    sampling orbit."""
    samples, _, _, _ = _orbit_samples(p, iterations, burn_in)
    if observable == "identity":
        return float(samples.mean())
    if observable == "square":
        return float(np.mean(samples * samples))
    raise ValueError("observable must be 'identity' or 'square'")


def push_forward(hist: DensityHistogram, p: QuadraticParams, subcells: int = 16) -> np.ndarray:
    """Image of the histogram under one map application, redistributing each
    bin's mass by where the centers of `subcells` sub-cells land.  An
    approximately invariant histogram barely moves.

    One evaluation point per bin is too coarse where the map folds (several
    source bins pile onto one target while neighbors get nothing), so each
    bin is split before evaluation.
    """
    lo, hi = hist.support
    edges = np.linspace(lo, hi, hist.bins + 1)
    h = (hi - lo) / hist.bins
    offsets = (np.arange(subcells) + 0.5) * (h / subcells)
    points = (edges[:-1, None] + offsets[None, :]).ravel()
    images = 1.0 - p.a * (points * points)
    idx = np.clip(np.searchsorted(edges, images, side="right") - 1, 0, hist.bins - 1)
    out = np.zeros_like(hist.mass)
    np.add.at(out, idx, np.repeat(hist.mass / subcells, subcells))
    return out


def histogram_csv(hist: DensityHistogram) -> str:
    """CSV rendering: header plus one `bin_lo,bin_hi,mass` row per bin."""
    lo, hi = hist.support
    edges = np.linspace(lo, hi, hist.bins + 1)
    lines = ["bin_lo,bin_hi,mass"]
    for i in range(hist.bins):
        lines.append(f"{edges[i]:.17g},{edges[i + 1]:.17g},{hist.mass[i]:.17g}")
    return "\n".join(lines) + "\n"


def classify_srb_evidence(
    p: QuadraticParams,
    budget: int = 2 * 10**5,
    support_threshold: float = SUPPORT_THRESHOLD,
) -> SrbEvidence:
    """Evidence-level classification, not a membership decision.

    PERIODIC_ATTRACTOR when an attracting or superstable cycle is certified;
    STOCHASTIC_LIKE when the exponent classifies positive and the density
    histogram covers more than support_threshold of the invariant interval;
    ESCAPED / UNDETERMINED otherwise.
    """
    rec = find_cycle_by_convergence(p, budget=budget)
    if rec is not None and rec.stability in (Stability.ATTRACTING, Stability.SUPERSTABLE):
        return SrbEvidence.PERIODIC_ATTRACTOR
    cls = classify_exponent(p, budget=max(budget, 10**3))
    if cls is ExponentClass.ESCAPED:
        return SrbEvidence.ESCAPED
    if cls is ExponentClass.POSITIVE:
        try:
            hist = estimate_density(p, iterations=max(budget, 10**4))
        except EscapedOrbitError:
            return SrbEvidence.ESCAPED
        if hist.effective_support_fraction() >= support_threshold:
            return SrbEvidence.STOCHASTIC_LIKE
    return SrbEvidence.UNDETERMINED
