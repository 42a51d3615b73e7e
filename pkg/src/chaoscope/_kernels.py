"""Hot loops, jitted once and cached on disk.

Every kernel is a pure function of its arguments; parallel kernels write each
output slot independently, so results do not depend on the thread count.

Status codes shared by the orbit kernels:
    0 = completed, 1 = escaped, 2 = hit the critical point exactly.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

STATUS_OK = 0
STATUS_ESCAPED = 1
STATUS_HIT_CRITICAL = 2

# Classification codes used by the grid kernels.
CODE_POSITIVE = 0
CODE_NON_POSITIVE = 1
CODE_HIT_CRITICAL = 2
CODE_ESCAPED = 3
CODE_INCONCLUSIVE = 4


@njit(cache=True)
def quad_cocycle(a, x0, n, escape_r):
    """Cumulative log |d/dx of the n-fold composition| along the orbit of x0.

    Returns (log_norms, filled, status).  log_norms[k-1] is the cumulative sum
    after k steps; on a critical hit the offending entry is the -inf sentinel
    and iteration stops; on escape the filled prefix is returned.
    """
    out = np.empty(n)
    x = x0
    total = 0.0
    for k in range(n):
        f = abs(-2.0 * a * x)
        if f == 0.0:
            out[k] = -np.inf
            return out, k + 1, STATUS_HIT_CRITICAL
        total += np.log(f)
        out[k] = total
        x = 1.0 - a * (x * x)
        if not abs(x) <= escape_r:
            return out, k + 1, STATUS_ESCAPED
    return out, n, STATUS_OK


@njit(cache=True)
def henon_cocycle(a, b, x0, y0, u0, w0, n, renorm_every, escape_r):
    """Cumulative log of the Jacobian-product norm applied to (u0, w0).

    The carried vector is rescaled to unit length every `renorm_every` steps;
    the shed norms accumulate in log space so entries never overflow.
    """
    out = np.empty(n)
    x, y = x0, y0
    u, w = u0, w0
    shed = 0.0
    for k in range(n):
        uu = -2.0 * a * x * u + w
        ww = b * u
        u, w = uu, ww
        x, y = 1.0 - a * (x * x) + y, b * x
        nv = np.hypot(u, w)
        if nv == 0.0:
            out[k] = -np.inf
            return out, k + 1, STATUS_HIT_CRITICAL
        out[k] = shed + np.log(nv)
        if (k + 1) % renorm_every == 0:
            shed += np.log(nv)
            u /= nv
            w /= nv
        if not np.hypot(x, y) <= escape_r:
            return out, k + 1, STATUS_ESCAPED
    return out, n, STATUS_OK


@njit(cache=True)
def henon_cocycle_naive(a, b, x0, y0, u0, w0, n):
    """Reference variant without renormalization; overflows for large n."""
    x, y = x0, y0
    u, w = u0, w0
    for k in range(n):
        uu = -2.0 * a * x * u + w
        ww = b * u
        u, w = uu, ww
        x, y = 1.0 - a * (x * x) + y, b * x
    return np.hypot(u, w)


@njit(cache=True, parallel=True)
def classify_grid_quad(a_arr, budget, threshold, escape_r, tail_frac):
    """Classify the critical-orbit exponent for every parameter in a_arr.

    Returns (codes, estimates, tail_sups); estimates are the plain averages
    over the pre-flag prefix, tail_sups the running-average suprema over the
    trailing `tail_frac` of steps.
    """
    m = a_arr.size
    codes = np.empty(m, dtype=np.int8)
    est = np.empty(m)
    sup = np.empty(m)
    for i in prange(m):
        a = a_arr[i]
        x = 1.0
        total = 0.0
        best = -np.inf
        kstart = int(budget * (1.0 - tail_frac))
        if kstart < 1:
            kstart = 1
        code = -1
        k = 0
        while k < budget:
            f = abs(-2.0 * a * x)
            if f == 0.0:
                code = CODE_HIT_CRITICAL
                break
            total += np.log(f)
            k += 1
            x = 1.0 - a * (x * x)
            if k >= kstart:
                v = total / k
                if v > best:
                    best = v
            if not abs(x) <= escape_r:
                code = CODE_ESCAPED
                break
        if code == -1:
            if best > threshold:
                code = CODE_POSITIVE
            elif best < -threshold:
                code = CODE_NON_POSITIVE
            else:
                code = CODE_INCONCLUSIVE
        codes[i] = code
        est[i] = total / k if k > 0 else np.nan
        sup[i] = best
    return codes, est, sup


@njit(cache=True, parallel=True)
def quad_orbit_final_grid(a_arr, x0, n, escape_r):
    """Advance the orbit of x0 by n steps for every parameter; returns the
    final points and per-parameter status codes."""
    m = a_arr.size
    xs = np.empty(m)
    status = np.empty(m, dtype=np.int8)
    for i in prange(m):
        a = a_arr[i]
        x = x0
        st = STATUS_OK
        for _ in range(n):
            x = 1.0 - a * (x * x)
            if not abs(x) <= escape_r:
                st = STATUS_ESCAPED
                break
        xs[i] = x
        status[i] = st
    return xs, status


@njit(cache=True)
def quad_orbit_collect(a, x0, burn_in, count, escape_r):
    """Drop burn_in steps, then record `count` orbit points.

    Simultaneously runs Brent cycle detection on exact float equality.
    Returns (samples, filled, status, capture_step, capture_period,
    capture_value); capture_step is -1 if the orbit never revisited a value
    exactly, otherwise capture_value is the revisited point.
    """
    samples = np.empty(count)
    x = x0
    tort = x0
    power = 1
    lam = 0
    capture_step = -1
    capture_period = 0
    capture_value = 0.0
    total = burn_in + count
    for k in range(total):
        x = 1.0 - a * (x * x)
        if not abs(x) <= escape_r:
            return samples, max(0, k - burn_in), STATUS_ESCAPED, capture_step, capture_period, capture_value
        if capture_step < 0:
            lam += 1
            if x == tort:
                capture_step = k + 1
                capture_period = lam
                capture_value = x
            elif lam == power:
                tort = x
                power *= 2
                lam = 0
        if k >= burn_in:
            samples[k - burn_in] = x
    return samples, count, STATUS_OK, capture_step, capture_period, capture_value


@njit(cache=True)
def greedy_separated_1d(orbits, eps):
    """Greedy maximal set of rows with pairwise sup-distance > eps.

    `orbits` is (N, m) with rows sorted by column 0; two rows can only fail to
    separate when their first coordinates differ by <= eps, so only a sliding
    tail window of accepted rows needs checking.
    """
    n_rows, m = orbits.shape
    acc = np.empty(n_rows, dtype=np.int64)
    na = 0
    lo = 0
    for i in range(n_rows):
        x0 = orbits[i, 0]
        while lo < na and orbits[acc[lo], 0] < x0 - eps:
            lo += 1
        ok = True
        for j in range(lo, na):
            r = acc[j]
            sep = False
            for t in range(m):
                if abs(orbits[r, t] - orbits[i, t]) > eps:
                    sep = True
                    break
            if not sep:
                ok = False
                break
        if ok:
            acc[na] = i
            na += 1
    return acc[:na].copy()


@njit(cache=True)
def greedy_separated_2d(xs, ys, eps):
    """Planar variant of greedy_separated_1d under the Euclidean metric.

    xs, ys are (N, m) orbit coordinates with rows sorted by xs[:, 0];
    Euclidean distance >= |dx|, so the same window pruning applies.
    """
    n_rows, m = xs.shape
    eps2 = eps * eps
    acc = np.empty(n_rows, dtype=np.int64)
    na = 0
    lo = 0
    for i in range(n_rows):
        x0 = xs[i, 0]
        while lo < na and xs[acc[lo], 0] < x0 - eps:
            lo += 1
        ok = True
        for j in range(lo, na):
            r = acc[j]
            sep = False
            for t in range(m):
                dx = xs[r, t] - xs[i, t]
                dy = ys[r, t] - ys[i, t]
                if dx * dx + dy * dy > eps2:
                    sep = True
                    break
            if not sep:
                ok = False
                break
        if ok:
            acc[na] = i
            na += 1
    return acc[:na].copy()
