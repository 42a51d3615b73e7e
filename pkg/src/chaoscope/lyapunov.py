"""Exponential growth rates of derivative products along orbits.

For the interval family the reference orbit starts at the critical value; for
the planar family the cocycle tracks the Jacobian product applied to a tangent
vector at a reference point, rescaled periodically so nothing overflows.

The limsup in the definitions is not computable; the reported finite-n
surrogate is the supremum of the running averages over the trailing 10% of
steps (`sup_estimate`), alongside the plain final average (`estimate`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from ._kernels import (
    CODE_ESCAPED,
    CODE_HIT_CRITICAL,
    CODE_INCONCLUSIVE,
    CODE_NON_POSITIVE,
    CODE_POSITIVE,
    STATUS_ESCAPED,
    STATUS_HIT_CRITICAL,
)
from .maps import ESCAPE_RADIUS, HenonParams, ParameterPoint, QuadraticParams

TAIL_FRACTION = 0.1
RENORM_EVERY = 32
DEFAULT_BUDGET = 10**6
DEFAULT_THRESHOLD = 0.01


class ExponentClass(enum.Enum):
    POSITIVE = "positive"
    NON_POSITIVE = "non_positive"
    HIT_CRITICAL = "hit_critical"
    ESCAPED = "escaped"
    INCONCLUSIVE = "inconclusive"


_CODE_TO_CLASS = {
    CODE_POSITIVE: ExponentClass.POSITIVE,
    CODE_NON_POSITIVE: ExponentClass.NON_POSITIVE,
    CODE_HIT_CRITICAL: ExponentClass.HIT_CRITICAL,
    CODE_ESCAPED: ExponentClass.ESCAPED,
    CODE_INCONCLUSIVE: ExponentClass.INCONCLUSIVE,
}


@dataclass
class CocycleTrace:
    """An orbit's running log-norm of the derivative product.

    log_norms[k-1] holds the value after k steps, so len(log_norms) == steps.
    On a critical hit the final entry is the -inf sentinel and `hit_critical`
    is set; estimate and sup_estimate are then taken over the finite prefix.
    On escape the trace covers the pre-escape prefix and `escaped` is set.
    """

    params: ParameterPoint
    start: object
    steps: int
    log_norms: np.ndarray
    estimate: float
    sup_estimate: float
    hit_critical: bool = False
    escaped: bool = False

    @property
    def finite_steps(self) -> int:
        return self.steps - 1 if self.hit_critical else self.steps


def _tail_sup(log_norms: np.ndarray, n_finite: int, tail_frac: float = TAIL_FRACTION) -> float:
    if n_finite <= 0:
        return math.nan
    kstart = max(1, int(n_finite * (1.0 - tail_frac)))
    ks = np.arange(kstart, n_finite + 1, dtype=np.float64)
    return float(np.max(log_norms[kstart - 1 : n_finite] / ks))


def _finish_trace(params, start, log_norms, filled, status) -> CocycleTrace:
    log_norms = np.asarray(log_norms[:filled])
    hit = status == STATUS_HIT_CRITICAL
    escaped = status == STATUS_ESCAPED
    n_finite = filled - 1 if hit else filled
    if n_finite > 0:
        estimate = float(log_norms[n_finite - 1] / n_finite)
        sup = _tail_sup(log_norms, n_finite)
    else:
        estimate = math.nan
        sup = math.nan
    return CocycleTrace(
        params=params,
        start=start,
        steps=filled,
        log_norms=log_norms,
        estimate=estimate,
        sup_estimate=sup,
        hit_critical=hit,
        escaped=escaped,
    )


def lyapunov_quadratic(p: QuadraticParams, n: int, escape_radius: float = ESCAPE_RADIUS) -> CocycleTrace:
    """Cocycle along the critical-value orbit (start x=1) of the interval map."""
    if n < 1:
        raise ValueError("n must be >= 1")
    log_norms, filled, status = _kernels.quad_cocycle(p.a, 1.0, n, escape_radius)
    return _finish_trace(p, 1.0, log_norms, filled, status)


def lyapunov_generic(
    p: QuadraticParams, x0: float, n: int, escape_radius: float = ESCAPE_RADIUS
) -> CocycleTrace:
    """Cocycle along the orbit of an arbitrary start x0 in [-1, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not -1.0 <= x0 <= 1.0:
        raise ValueError("x0 must lie in [-1, 1]")
    log_norms, filled, status = _kernels.quad_cocycle(p.a, x0, n, escape_radius)
    return _finish_trace(p, x0, log_norms, filled, status)


def lyapunov_henon(
    p: HenonParams,
    z0: Tuple[float, float] = (0.0, 0.0),
    v0: Tuple[float, float] = (0.0, 1.0),
    n: int = DEFAULT_BUDGET,
    renorm_every: int = RENORM_EVERY,
    escape_radius: float = ESCAPE_RADIUS,
) -> CocycleTrace:
    """Cocycle of the Jacobian product applied to v0 at the orbit of z0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if v0 == (0.0, 0.0):
        raise ValueError("v0 must be nonzero")
    log_norms, filled, status = _kernels.henon_cocycle(
        p.a, p.b, z0[0], z0[1], v0[0], v0[1], n, renorm_every, escape_radius
    )
    return _finish_trace(p, (z0, v0), log_norms, filled, status)


def classify_exponent(
    params: ParameterPoint,
    budget: int = DEFAULT_BUDGET,
    threshold: float = DEFAULT_THRESHOLD,
) -> ExponentClass:
    """Sign classification of the finite-budget exponent surrogate.

    POSITIVE / NON_POSITIVE when the tail supremum clears +/-threshold;
    HIT_CRITICAL and ESCAPED pass through the orbit flags; INCONCLUSIVE
    otherwise.  Deterministic for a fixed configuration.
    """
    if budget < 10**3:
        raise ValueError("budget must be >= 1000")
    if isinstance(params, QuadraticParams):
        trace = lyapunov_quadratic(params, budget)
    else:
        trace = lyapunov_henon(params, n=budget)
    if trace.hit_critical:
        return ExponentClass.HIT_CRITICAL
    if trace.escaped:
        return ExponentClass.ESCAPED
    if trace.sup_estimate > threshold:
        return ExponentClass.POSITIVE
    if trace.sup_estimate < -threshold:
        return ExponentClass.NON_POSITIVE
    return ExponentClass.INCONCLUSIVE


@dataclass
class ExponentScan:
    """Vectorized classify_exponent over a parameter grid (quadratic family)."""

    a_values: np.ndarray
    codes: np.ndarray
    estimates: np.ndarray
    sup_estimates: np.ndarray

    def classes(self) -> list:
        return [_CODE_TO_CLASS[int(c)] for c in self.codes]

    @property
    def positive_mask(self) -> np.ndarray:
        return self.codes == CODE_POSITIVE


def exponent_scan(
    a_values: Sequence[float],
    budget: int = 10**4,
    threshold: float = DEFAULT_THRESHOLD,
    escape_radius: float = ESCAPE_RADIUS,
) -> ExponentScan:
    """classify_exponent on every grid parameter at once.

    Each grid cell is computed independently (the scan is data-parallel), so
    results are identical to per-point classify_exponent calls at the same
    budget and threshold, and identical across thread counts.
    """
    a_arr = np.ascontiguousarray(np.asarray(a_values, dtype=np.float64))
    if budget < 10**3:
        raise ValueError("budget must be >= 1000")
    codes, est, sup = _kernels.classify_grid_quad(
        a_arr, budget, threshold, escape_radius, TAIL_FRACTION
    )
    return ExponentScan(a_arr, codes, est, sup)


def positive_run_count(positive_mask: np.ndarray) -> int:
    """Number of maximal runs of True in a boolean sequence."""
    m = np.asarray(positive_mask, dtype=bool)
    if m.size == 0:
        return 0
    return int(m[0]) + int(np.sum(m[1:] & ~m[:-1]))
