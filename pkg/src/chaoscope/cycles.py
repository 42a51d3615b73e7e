"""Attracting cycles, superstable parameters, the period-doubling cascade,
and hyperbolic-window scans for the interval family.

Cycle detection follows the critical orbit: any attracting cycle of the
interval map attracts the critical point, so a long burn-in followed by
near-recurrence detection and Newton refinement certifies the cycle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from ._kernels import STATUS_OK
from .maps import ESCAPE_RADIUS, QuadraticParams

TOL_CYCLE = 1e-10
TOL_ROOT = 1e-12
TOL_MULT = 1e-6

# Asymptotic gap ratio used to seed cascade brackets before enough members
# exist to measure it.
_DELTA_SEED = 4.669201609102990


class Stability(enum.Enum):
    ATTRACTING = "attracting"
    SUPERSTABLE = "superstable"
    NEUTRAL = "neutral"
    REPELLING = "repelling"


@dataclass(frozen=True)
class CycleRecord:
    """A certified periodic orbit: minimal period, a representative point,
    the chain-rule multiplier, and its stability class."""

    params: QuadraticParams
    period: int
    point: float
    multiplier: float
    stability: Stability


@dataclass
class Window:
    """A maximal run of adjacent grid hits sharing one period."""

    period: int
    a_lo: float
    a_hi: float
    count: int


@dataclass
class CascadeResult:
    """Successive superstable parameters a_k (period 2^k), gap-ratio
    estimates, and the geometric-tail extrapolation of their limit."""

    superstable_params: List[float]
    delta_estimates: List[float]
    c_estimate: float


class BracketError(ValueError):
    """The bracket does not isolate exactly one sign change."""


def _classify_multiplier(mult: float) -> Stability:
    am = abs(mult)
    if am <= TOL_MULT:
        return Stability.SUPERSTABLE
    if abs(am - 1.0) <= TOL_MULT:
        return Stability.NEUTRAL
    if am < 1.0:
        return Stability.ATTRACTING
    return Stability.REPELLING


def _orbit_step(a: float, x: float) -> float:
    return 1.0 - a * (x * x)


def _cycle_multiplier(a: float, x: float, period: int) -> float:
    mult = 1.0
    for _ in range(period):
        mult *= -2.0 * a * x
        x = _orbit_step(a, x)
    return mult


def _refine_cycle_point(a: float, x0: float, period: int, iters: int = 80) -> float:
    """Newton iteration on x -> f^period(x) - x via the chain rule."""
    x = x0
    for _ in range(iters):
        y, d = x, 1.0
        for _ in range(period):
            d *= -2.0 * a * y
            y = _orbit_step(a, y)
        g = y - x
        gd = d - 1.0
        if gd == 0.0:
            break
        step = g / gd
        x -= step
        if abs(step) < 1e-16:
            break
    return x


def _verify_cycle(a: float, x: float, period: int, tol: float = TOL_CYCLE) -> bool:
    y = x
    for _ in range(period):
        y = _orbit_step(a, y)
        if not abs(y) <= ESCAPE_RADIUS:
            return False
    return abs(y - x) <= tol


def _minimal_period(a: float, x: float, period: int, tol: float = TOL_CYCLE) -> bool:
    for d in range(1, period):
        if period % d == 0:
            y = x
            for _ in range(d):
                y = _orbit_step(a, y)
            if abs(y - x) <= tol:
                return False
    return True


def find_cycle_by_convergence(
    p: QuadraticParams,
    max_period: int = 24,
    budget: int = 30000,
    recurrence_tol: float = 1e-4,
    burn_in_x: Optional[float] = None,
) -> Optional[CycleRecord]:
    """Certify the cycle the critical orbit converges to, if any.

    Returns None when no recurrence below max_period shows up within the
    budget, when the orbit escapes, or when refinement fails verification.
    `burn_in_x` short-circuits the burn-in for scans that batch it.
    """
    a = p.a
    if burn_in_x is None:
        x = 0.0
        for _ in range(budget):
            x = _orbit_step(a, x)
            if not abs(x) <= ESCAPE_RADIUS:
                return None
    else:
        x = burn_in_x
        if not abs(x) <= ESCAPE_RADIUS:
            return None
    pts = [x]
    for _ in range(max_period):
        pts.append(_orbit_step(a, pts[-1]))
        if not abs(pts[-1]) <= ESCAPE_RADIUS:
            return None
    period = None
    for q in range(1, max_period + 1):
        if abs(pts[q] - pts[0]) < recurrence_tol:
            period = q
            break
    if period is None:
        return None
    x_star = _refine_cycle_point(a, pts[0], period)
    if not (math.isfinite(x_star) and _verify_cycle(a, x_star, period)):
        return None
    if not _minimal_period(a, x_star, period):
        return None
    mult = _cycle_multiplier(a, x_star, period)
    return CycleRecord(p, period, x_star, mult, _classify_multiplier(mult))


def critical_orbit_return(a: float, k: int) -> float:
    """Value of the 2^k-fold composition at the critical point.

    Its zeros in a are the superstable parameters of period dividing 2^k.
    """
    x = 0.0
    for _ in range(1 << k):
        x = _orbit_step(a, x)
    return x


def bracketed_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = TOL_ROOT,
    max_iter: int = 200,
) -> float:
    """Root of f on [lo, hi] by bisection with secant acceleration.

    Requires a sign change; returns immediately when an iterate evaluates to
    exactly zero, which keeps rational roots exact.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        denom = fhi - flo
        s = lo - flo * (hi - lo) / denom if denom != 0.0 else 0.5 * (lo + hi)
        if not lo < s < hi:
            s = 0.5 * (lo + hi)
        fs = f(s)
        if fs == 0.0 or (hi - lo) < tol:
            return s
        if flo * fs < 0.0:
            hi, fhi = s, fs
        else:
            lo, flo = s, fs
        # bisect when the secant end stagnates
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _count_sign_changes(f: Callable[[float], float], lo: float, hi: float, samples: int = 33) -> int:
    """Sign changes of f over an even subsample of [lo, hi]; an exact zero
    counts as one crossing."""
    vals = [f(x) for x in np.linspace(lo, hi, samples)]
    changes = sum(1 for x in vals[1:-1] if x == 0.0)
    nonzero = [v for v in vals if v != 0.0]
    changes += sum(1 for u, v in zip(nonzero, nonzero[1:]) if u * v < 0.0)
    return changes


_DEFAULT_BRACKETS = {1: (0.75, 1.3), 2: (1.2, 1.39)}


def superstable_parameter(k: int, bracket: Optional[Tuple[float, float]] = None) -> float:
    """Parameter at which the critical point is periodic with period 2^k,
    solved inside a bracket that isolates the cascade member.

    Default brackets exist for k = 1 and k = 2; deeper members need a bracket
    (run_cascade derives them from the measured gap ratio).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if bracket is None:
        if k not in _DEFAULT_BRACKETS:
            raise BracketError(
                f"no default bracket for k={k}; pass one (run_cascade derives brackets)"
            )
        bracket = _DEFAULT_BRACKETS[k]
    lo, hi = bracket
    f = lambda t: critical_orbit_return(t, k)
    if _count_sign_changes(f, lo, hi) > 1:
        raise BracketError(f"multiple sign changes on [{lo}, {hi}]; tighten the bracket")
    root = bracketed_root(f, lo, hi)
    # the root must be a genuinely new period, not an earlier cascade member
    for j in range(k):
        if abs(critical_orbit_return(root, j)) <= 1e-9:
            raise BracketError(
                f"bracket [{lo}, {hi}] captured a period-2^{j} member; tighten it"
            )
    return root


def run_cascade(k_max: int, bracket_frac: float = 0.2) -> CascadeResult:
    """Chain superstable parameters up to period 2^k_max and extrapolate
    their accumulation point by a geometric tail sum.

    Brackets for k >= 3 are centered on the gap-ratio prediction with
    half-width bracket_frac times the predicted gap; the gaps shrink
    geometrically, so a global scan would confuse nearby roots.
    """
    if k_max < 3:
        raise ValueError("k_max must be >= 3")
    members = [superstable_parameter(1), superstable_parameter(2)]
    deltas: List[float] = []
    dhat = _DELTA_SEED
    for k in range(3, k_max + 1):
        gap = (members[-1] - members[-2]) / dhat
        pred = members[-1] + gap
        root = None
        err: Optional[BracketError] = None
        # widen cautiously on a miss; fractions stay below ~0.5 of the gap so
        # the bracket never reaches the next member or the accumulation point
        for frac in (bracket_frac, 0.3, 0.4, 0.45):
            try:
                root = superstable_parameter(k, (pred - frac * gap, pred + frac * gap))
                break
            except BracketError as exc:
                err = exc
        if root is None:
            raise err  # pragma: no cover - prediction off by more than 45%
        members.append(root)
        dhat = (members[-2] - members[-3]) / (members[-1] - members[-2])
        deltas.append(dhat)
    c_estimate = members[-1] + (members[-1] - members[-2]) / (dhat - 1.0)
    return CascadeResult(members, deltas, c_estimate)


def scan_windows(
    interval: Tuple[float, float],
    grid_points: int,
    max_period: int = 24,
    budget: int = 30000,
) -> List[Tuple[float, CycleRecord]]:
    """find_cycle_by_convergence on every grid parameter; returns the hits.

    The burn-in runs vectorized across the grid; refinement is per point.
    An empty list is a valid result (no cycles certified at this budget).
    """
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    a_arr = np.linspace(interval[0], interval[1], grid_points)
    xs, status = _kernels.quad_orbit_final_grid(a_arr, 0.0, budget, ESCAPE_RADIUS)
    hits: List[Tuple[float, CycleRecord]] = []
    for a, x, st in zip(a_arr, xs, status):
        if st != STATUS_OK:
            continue
        rec = find_cycle_by_convergence(
            QuadraticParams(float(a)), max_period, budget, burn_in_x=float(x)
        )
        if rec is not None and rec.stability in (Stability.ATTRACTING, Stability.SUPERSTABLE):
            hits.append((float(a), rec))
    return hits


def merge_windows(hits: Sequence[Tuple[float, CycleRecord]]) -> List[Window]:
    """Merge adjacent hits with equal period into maximal runs; a period
    change splits the run.  Pure reporting convention."""
    windows: List[Window] = []
    for a, rec in hits:
        if windows and windows[-1].period == rec.period:
            windows[-1].a_hi = a
            windows[-1].count += 1
        else:
            windows.append(Window(rec.period, a, a, 1))
    return windows
