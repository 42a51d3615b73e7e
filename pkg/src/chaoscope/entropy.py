"""Topological entropy three ways: exact lap-number growth for the interval
family, maximal separated sets under the dynamical metric for arbitrary
systems, and spectral radius of transition matrices for piecewise-linear
Markov interval maps.  Plus the monotonicity check and the threshold decision
for positive entropy in the interval family.

Lap counting is exact: the number of monotone branches of the n-fold
composition equals 1 plus the number of preimages of the turning point up to
depth n-1, and those preimages solve in closed form.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import _kernels
from .cycles import run_cascade
from .maps import HenonParams, QuadraticParams

DEFAULT_LAP_DEPTH = 22
MAX_TREE_NODES = 1 << 23
RATIO_WINDOW = 4
EPSILON_SCHEDULE = (0.05, 0.02, 0.01)
DEFAULT_CASCADE_DEPTH = 10
DEFAULT_MARGIN = 1e-4
TOL_MARKOV = 1e-9


class EntropyMethod(enum.Enum):
    LAP_COUNT = "lap_count"
    SEPARATED_SET = "separated_set"
    MARKOV_SPECTRAL = "markov_spectral"


class EntPlusClass(enum.Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    BOUNDARY = "boundary"


class LapBudgetError(RuntimeError):
    """The preimage tree outgrew the node budget before reaching depth n."""


class NotMarkovError(ValueError):
    """The breakpoint partition is not Markov at the given tolerance."""


@dataclass
class EntropyEstimate:
    """An entropy value in nats with its method tag, an error bound where the
    method admits one, and the per-n sequence behind the limit."""

    value: float
    method: EntropyMethod
    error_bound: Optional[float]
    diagnostics: np.ndarray


# ---------------------------------------------------------------------------
# lap numbers
# ---------------------------------------------------------------------------


def lap_sequence(p: QuadraticParams, n: int, node_budget: int = MAX_TREE_NODES) -> List[int]:
    """Exact lap counts of the k-fold composition for k = 1..n.

    Counts the preimage tree of the turning point inside [-1, 1]; preimages of
    y are +/-sqrt((1-y)/a), kept while they stay in the interval.
    """
    if not 0.0 < p.a <= 2.0:
        raise ValueError("lap counting requires 0 < a <= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    a = p.a
    level = np.array([0.0])
    laps: List[int] = []
    total_nodes = 1
    running = 1
    for _ in range(n):
        running += level.size
        laps.append(running)
        t = (1.0 - level) / a
        r = np.sqrt(t[t >= 0.0])
        r = r[r <= 1.0]
        pos = r[r > 0.0]
        level = np.concatenate([pos, -pos, r[r == 0.0]])
        total_nodes += level.size
        if total_nodes > node_budget:
            raise LapBudgetError(
                f"preimage tree exceeded {node_budget} nodes at depth {len(laps)}"
            )
    return laps


def lap_count(p: QuadraticParams, n: int) -> int:
    """Number of monotone laps of the n-fold composition on [-1, 1]."""
    return lap_sequence(p, n)[-1]


def entropy_lap(
    p: QuadraticParams, n_max: int = DEFAULT_LAP_DEPTH, window: int = RATIO_WINDOW
) -> EntropyEstimate:
    """Entropy from exact lap growth.

    The reported value is the windowed growth rate
    (log lap(n) - log lap(n-w)) / w, which sheds the constant prefactor that
    the plain average (1/n) log lap(n) carries; that average over-estimates
    the limit (lap counts are submultiplicative) and is kept in diagnostics.
    The bound covers the gap between the two plus the tail wobble.
    """
    laps = lap_sequence(p, n_max)
    logs = np.log(np.array(laps, dtype=np.float64))
    ns = np.arange(1, n_max + 1, dtype=np.float64)
    per_n = logs / ns
    w = min(window, n_max - 1)
    if w >= 1:
        value = float((logs[-1] - logs[-1 - w]) / w)
        steps = np.diff(logs[-(w + 1):])
        wobble = float(steps.max() - steps.min()) if steps.size else 0.0
    else:
        value = float(per_n[-1])
        wobble = 0.0
    gap = max(float(per_n[-1]) - value, 0.0)
    return EntropyEstimate(
        value=value,
        method=EntropyMethod.LAP_COUNT,
        error_bound=gap + 0.5 * wobble,
        diagnostics=per_n,
    )


# ---------------------------------------------------------------------------
# separated sets
# ---------------------------------------------------------------------------

MapLike = Union[QuadraticParams, HenonParams, Callable[[np.ndarray], np.ndarray]]


def _orbit_table(map_like: MapLike, sample: np.ndarray, n: int):
    """Orbit coordinates for every sample point out to time n.

    Returns (xs, ys) of shape (N, n+1); ys is None for one-dimensional data.
    Callables must map coordinate arrays to coordinate arrays.
    """
    sample = np.asarray(sample, dtype=np.float64)
    if isinstance(map_like, QuadraticParams):
        step = lambda x: 1.0 - map_like.a * (x * x)
        planar = False
    elif isinstance(map_like, HenonParams):
        a, b = map_like.a, map_like.b
        step = lambda z: (1.0 - a * (z[0] * z[0]) + z[1], b * z[0])
        planar = True
    else:
        step = map_like
        planar = sample.ndim == 2
    if planar:
        xs = np.empty((sample.shape[0], n + 1))
        ys = np.empty_like(xs)
        x, y = sample[:, 0].copy(), sample[:, 1].copy()
        xs[:, 0], ys[:, 0] = x, y
        for t in range(1, n + 1):
            x, y = step((x, y))
            xs[:, t], ys[:, t] = x, y
        return xs, ys
    xs = np.empty((sample.shape[0], n + 1))
    x = sample.copy()
    xs[:, 0] = x
    for t in range(1, n + 1):
        x = step(x)
        xs[:, t] = x
    return xs, None


def separated_set(map_like: MapLike, sample: np.ndarray, n: int, epsilon: float) -> np.ndarray:
    """Indices (into sample) of a greedy maximal subset whose members stay
    pairwise more than epsilon apart at some time <= n.

    Points are processed in order of their first coordinate; the result is a
    maximal separated subset of the sample, deterministic for a fixed sample.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    xs, ys = _orbit_table(map_like, sample, n)
    order = np.argsort(xs[:, 0], kind="stable")
    if ys is None:
        acc = _kernels.greedy_separated_1d(np.ascontiguousarray(xs[order]), epsilon)
    else:
        acc = _kernels.greedy_separated_2d(
            np.ascontiguousarray(xs[order]), np.ascontiguousarray(ys[order]), epsilon
        )
    return np.sort(order[acc])


def estimate_entropy_separated(
    map_like: MapLike, sample: np.ndarray, n: int, epsilon: float
) -> EntropyEstimate:
    """(1/n) log of the greedy separated-set cardinality.

    This lower-bounds the separated-set growth restricted to the sample; no
    upper bound is claimed, so error_bound is None.  Diagnostics hold the
    per-horizon values (1/k) log card(k) on a small ladder of horizons.
    """
    ladder = sorted({max(1, n // 4), max(1, n // 2), max(1, (3 * n) // 4), n})
    diag = []
    value = 0.0
    for k in ladder:
        card = separated_set(map_like, sample, k, epsilon).size
        v = math.log(card) / k if card > 0 else 0.0
        diag.append(v)
        if k == n:
            value = v
    return EntropyEstimate(
        value=value,
        method=EntropyMethod.SEPARATED_SET,
        error_bound=None,
        diagnostics=np.array(diag),
    )


def separated_epsilon_schedule(
    map_like: MapLike,
    sample: np.ndarray,
    n: int,
    epsilons: Sequence[float] = EPSILON_SCHEDULE,
) -> EntropyEstimate:
    """The separated estimator over a fixed epsilon ladder.

    The vanishing-epsilon limit in the definition is replaced by this
    documented finite schedule: the finest epsilon's value is reported, the
    coarser values ride along in diagnostics (coarse to fine).
    """
    if not epsilons:
        raise ValueError("need at least one epsilon")
    values = []
    for eps in sorted(epsilons, reverse=True):
        card = separated_set(map_like, sample, n, eps).size
        values.append(math.log(card) / n if card > 0 else 0.0)
    return EntropyEstimate(
        value=values[-1],
        method=EntropyMethod.SEPARATED_SET,
        error_bound=None,
        diagnostics=np.array(values),
    )


def verify_separated(map_like: MapLike, sample: np.ndarray, indices: np.ndarray,
                     n: int, epsilon: float) -> bool:
    """Independent pairwise recheck that the selected points really are
    (n, epsilon)-separated.  Only pairs within epsilon at time 0 can fail,
    so the check slides a window over the points sorted by first coordinate.
    """
    xs, ys = _orbit_table(map_like, np.asarray(sample)[indices], n)
    order = np.argsort(xs[:, 0], kind="stable")
    xs = xs[order]
    ys = ys[order] if ys is not None else None
    lo = 0
    for i in range(xs.shape[0]):
        while xs[lo, 0] < xs[i, 0] - epsilon:
            lo += 1
        if lo == i:
            continue
        if ys is None:
            dist = np.max(np.abs(xs[lo:i] - xs[i]), axis=1)
        else:
            dist = np.sqrt(np.max((xs[lo:i] - xs[i]) ** 2 + (ys[lo:i] - ys[i]) ** 2, axis=1))
        if not np.all(dist > epsilon):
            return False
    return True


# ---------------------------------------------------------------------------
# piecewise-linear Markov maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseLinearMap:
    """Interval map that is affine on each cell of a breakpoint partition.
    Continuity across breakpoints is not required."""

    breakpoints: Tuple[float, ...]
    slopes: Tuple[float, ...]
    intercepts: Tuple[float, ...]

    def __post_init__(self):
        if len(self.breakpoints) < 2:
            raise ValueError("need at least one piece")
        if len(self.slopes) != len(self.breakpoints) - 1 or len(self.slopes) != len(self.intercepts):
            raise ValueError("slopes/intercepts must match the piece count")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @property
    def pieces(self) -> int:
        return len(self.slopes)

    @property
    def domain(self) -> Tuple[float, float]:
        return self.breakpoints[0], self.breakpoints[-1]

    def piece_index(self, x: float) -> int:
        i = bisect.bisect_right(self.breakpoints, x) - 1
        return min(max(i, 0), self.pieces - 1)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        idx = np.clip(np.searchsorted(self.breakpoints, x, side="right") - 1, 0, self.pieces - 1)
        s = np.asarray(self.slopes)[idx]
        c = np.asarray(self.intercepts)[idx]
        out = s * x + c
        return float(out) if out.ndim == 0 else out


def parse_pl_map(text: str) -> PiecewiseLinearMap:
    """Parse the one-piece-per-line format: `lo hi slope intercept`,
    whitespace-separated decimal literals; `#` starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected `lo hi slope intercept`")
        try:
            rows.append(tuple(float(v) for v in parts))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if not rows:
        raise ValueError("no pieces given")
    rows.sort(key=lambda r: r[0])
    breaks = [rows[0][0]]
    slopes, intercepts = [], []
    for lo, hi, s, c in rows:
        if lo != breaks[-1]:
            raise ValueError(f"pieces do not tile the interval at {lo}")
        if hi <= lo:
            raise ValueError(f"empty piece [{lo}, {hi}]")
        breaks.append(hi)
        slopes.append(s)
        intercepts.append(c)
    return PiecewiseLinearMap(tuple(breaks), tuple(slopes), tuple(intercepts))


def format_pl_map(m: PiecewiseLinearMap) -> str:
    lines = [
        f"{lo:.17g} {hi:.17g} {s:.17g} {c:.17g}"
        for lo, hi, s, c in zip(m.breakpoints, m.breakpoints[1:], m.slopes, m.intercepts)
    ]
    return "\n".join(lines) + "\n"


def _piece_images(m: PiecewiseLinearMap):
    for lo, hi, s, c in zip(m.breakpoints, m.breakpoints[1:], m.slopes, m.intercepts):
        a, b = s * lo + c, s * hi + c
        yield (a, b) if a <= b else (b, a)


def transition_matrix(m: PiecewiseLinearMap, tol: float = TOL_MARKOV) -> np.ndarray:
    """0/1 matrix with M[i, j] = 1 when piece j lies inside the image of
    piece i.  Raises NotMarkovError when some image fails to align with the
    partition within tol."""
    breaks = np.asarray(m.breakpoints)
    lo_dom, hi_dom = m.domain
    mat = np.zeros((m.pieces, m.pieces))
    for i, (im_lo, im_hi) in enumerate(_piece_images(m)):
        if im_lo < lo_dom - tol or im_hi > hi_dom + tol:
            raise NotMarkovError(f"piece {i} maps outside the domain")
        if np.min(np.abs(breaks - im_lo)) > tol or np.min(np.abs(breaks - im_hi)) > tol:
            raise NotMarkovError(f"image of piece {i} does not align with the partition")
        for j in range(m.pieces):
            if breaks[j] >= im_lo - tol and breaks[j + 1] <= im_hi + tol:
                mat[i, j] = 1.0
    return mat


def refine_to_markov(
    m: PiecewiseLinearMap, max_rounds: int = 8, tol: float = TOL_MARKOV
) -> PiecewiseLinearMap:
    """Pull breakpoints back through the map until the partition is Markov,
    at most max_rounds times."""
    current = m
    for _ in range(max_rounds + 1):
        try:
            transition_matrix(current, tol)
            return current
        except NotMarkovError:
            pass
        new_breaks = set(current.breakpoints)
        for lo, hi, s, c in zip(
            current.breakpoints, current.breakpoints[1:], current.slopes, current.intercepts
        ):
            if s == 0.0:
                continue
            for b in current.breakpoints:
                x = (b - c) / s
                if lo + tol < x < hi - tol:
                    new_breaks.add(x)
        if len(new_breaks) == len(current.breakpoints):
            break
        breaks = tuple(sorted(new_breaks))
        slopes, intercepts = [], []
        for lo in breaks[:-1]:
            i = current.piece_index(lo)
            slopes.append(current.slopes[i])
            intercepts.append(current.intercepts[i])
        current = PiecewiseLinearMap(breaks, tuple(slopes), tuple(intercepts))
    raise NotMarkovError(f"partition not Markov after {max_rounds} refinement rounds")


def entropy_pl_markov(
    m: PiecewiseLinearMap, tol: float = TOL_MARKOV, max_iters: int = 20000
) -> EntropyEstimate:
    """log spectral radius of the transition matrix by power iteration.

    Iterates on M + I (same Perron vector, radius shifted by one) so periodic
    transition graphs still converge; the error bound comes from the
    Collatz-Wielandt ratio spread, which brackets the radius for any
    nonnegative matrix and a positive vector.
    """
    mat = transition_matrix(m, tol) + np.eye(m.pieces)
    v = np.ones(m.pieces)
    lo_r, hi_r = 0.0, math.inf
    history = []
    for _ in range(max_iters):
        w = mat @ v
        ratios = w / v
        lo_r, hi_r = float(ratios.min()), float(ratios.max())
        history.append(0.5 * (lo_r + hi_r) - 1.0)
        v = w / w.max()
        if hi_r - lo_r < 1e-14:
            break
    lo_rho, hi_rho = max(lo_r - 1.0, 1e-300), hi_r - 1.0
    if hi_rho < 1.0:
        # nilpotent-ish transition graph: no orbit complexity survives
        return EntropyEstimate(0.0, EntropyMethod.MARKOV_SPECTRAL, 0.0, np.array(history))
    value = 0.5 * (math.log(lo_rho) + math.log(hi_rho))
    bound = 0.5 * (math.log(hi_rho) - math.log(lo_rho))
    return EntropyEstimate(value, EntropyMethod.MARKOV_SPECTRAL, bound, np.array(history))


# ---------------------------------------------------------------------------
# monotonicity and the entropy-positivity decision
# ---------------------------------------------------------------------------


@dataclass
class MonotonicityReport:
    """Adjacent-pair violations of non-decreasing entropy along a grid,
    beyond the summed error bounds of the two estimates."""

    a_values: np.ndarray
    values: np.ndarray
    bounds: np.ndarray
    violations: List[Tuple[int, float]]

    @property
    def passed(self) -> bool:
        return not self.violations


def check_monotonicity(a_values: Sequence[float], n_max: int = 18) -> MonotonicityReport:
    """entropy_lap on every grid point; report adjacent decreases that exceed
    the summed error bounds."""
    a_arr = np.asarray(list(a_values), dtype=np.float64)
    if np.any(np.diff(a_arr) <= 0.0):
        raise ValueError("grid must be strictly increasing")
    vals = np.empty(a_arr.size)
    bnds = np.empty(a_arr.size)
    for i, a in enumerate(a_arr):
        est = entropy_lap(QuadraticParams(float(a)), n_max)
        vals[i] = est.value
        bnds[i] = est.error_bound if est.error_bound is not None else 0.0
    violations = []
    for i in range(a_arr.size - 1):
        deficit = vals[i] - vals[i + 1] - (bnds[i] + bnds[i + 1])
        if deficit > 0.0:
            violations.append((i, float(deficit)))
    return MonotonicityReport(a_arr, vals, bnds, violations)


@lru_cache(maxsize=None)
def zero_entropy_boundary(cascade_depth: int = DEFAULT_CASCADE_DEPTH) -> float:
    """Accumulation point of the period-doubling cascade, cached per depth
    (single-initialization: concurrent callers observe one value)."""
    return run_cascade(cascade_depth).c_estimate


def decide_ent_plus(
    a: float,
    cascade_depth: int = DEFAULT_CASCADE_DEPTH,
    margin: float = DEFAULT_MARGIN,
) -> EntPlusClass:
    """Positive/zero entropy decision for the interval family by comparing a
    against the cascade accumulation point, honest about the numerical margin:
    parameters within +/-margin of the boundary come back BOUNDARY."""
    if not 0.0 < a <= 2.0:
        raise ValueError("decision requires 0 < a <= 2")
    c = zero_entropy_boundary(cascade_depth)
    if a > c + margin:
        return EntPlusClass.POSITIVE
    if a < c - margin:
        return EntPlusClass.ZERO
    return EntPlusClass.BOUNDARY
