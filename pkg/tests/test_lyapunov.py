import math

import numpy as np
import pytest

from chaoscope import _kernels
from chaoscope.lyapunov import (
    ExponentClass,
    classify_exponent,
    exponent_scan,
    lyapunov_generic,
    lyapunov_henon,
    lyapunov_quadratic,
)
from chaoscope.maps import HenonParams, QuadraticParams


def test_ulam_critical_orbit_exponent_exact():
    # orbit 1 -> -1 -> -1 ...: every factor has modulus 4
    tr = lyapunov_quadratic(QuadraticParams(2.0), 100)
    assert tr.estimate == pytest.approx(math.log(4.0), abs=1e-12)
    assert tr.sup_estimate >= tr.estimate
    assert tr.steps == 100


def test_attracting_fixed_point_exponent():
    # orbit converges to the fixed point with multiplier 1 - sqrt(3)
    tr = lyapunov_quadratic(QuadraticParams(0.5), 10**4)
    assert tr.estimate == pytest.approx(math.log(math.sqrt(3.0) - 1.0), abs=1e-3)
    assert tr.estimate == pytest.approx(-0.3120, abs=1e-3)


def test_superstable_orbit_hits_critical_point():
    tr = lyapunov_quadratic(QuadraticParams(1.0), 1000)
    assert tr.hit_critical
    assert tr.log_norms[-1] == -math.inf
    assert math.isfinite(tr.estimate)


def test_trace_shape_invariants():
    tr = lyapunov_quadratic(QuadraticParams(1.9), 5000)
    assert len(tr.log_norms) == tr.steps == 5000
    assert tr.estimate == tr.log_norms[-1] / tr.steps
    assert tr.sup_estimate >= tr.estimate


def test_log_norm_increments_match_pointwise_factors():
    a = 1.77
    tr = lyapunov_quadratic(QuadraticParams(a), 2000)
    x = 1.0
    prev = 0.0
    for k in range(300):
        factor = abs(-2.0 * a * x)
        assert tr.log_norms[k] - prev == pytest.approx(math.log(factor), abs=1e-12)
        prev = tr.log_norms[k]
        x = 1.0 - a * (x * x)


def test_henon_b0_reduction_identity():
    # planar cocycle at b=0 equals the interval cocycle offset by one step
    for a in np.linspace(0.02, 2.0, 100):
        a = float(a)
        n = 1000
        q = lyapunov_quadratic(QuadraticParams(a), n)
        h = lyapunov_henon(HenonParams(a, 0.0), n=n + 1)
        assert q.hit_critical == h.hit_critical
        kmax = min(q.finite_steps, h.finite_steps - 1)
        qv = q.log_norms[:kmax]
        hv = h.log_norms[1 : kmax + 1]
        rel = np.max(np.abs(hv - qv) / np.maximum(1.0, np.abs(qv)))
        assert rel <= 1e-12


def _qr_top_exponent(a: float, b: float, n: int) -> float:
    """Independent oracle: top exponent via Gram-Schmidt on a 2-frame."""
    x, y = 0.0, 0.0
    q11, q21 = 1.0, 0.0
    total = 0.0
    for _ in range(n):
        j11 = -2.0 * a * x
        p11 = j11 * q11 + q21
        p21 = b * q11
        r11 = math.hypot(p11, p21)
        q11, q21 = p11 / r11, p21 / r11
        total += math.log(r11)
        x, y = 1.0 - a * (x * x) + y, b * x
    return total / n


def test_henon_classic_parameters_against_frame_oracle():
    tr = lyapunov_henon(HenonParams(1.4, 0.3), n=10**6)
    assert tr.estimate == pytest.approx(0.42, abs=0.02)
    oracle = _qr_top_exponent(1.4, 0.3, 3 * 10**5)
    assert tr.estimate == pytest.approx(oracle, abs=0.02)


def test_henon_attracting_fixed_point_against_eigen_oracle():
    a = b = 0.1
    # fixed point solves x = 1 - a x^2 + b x
    x_star = (-(b - 1.0) - math.sqrt((b - 1.0) ** 2 + 4.0 * a)) / (2.0 * a)
    x_star = min(x_star, (-(b - 1.0) + math.sqrt((b - 1.0) ** 2 + 4.0 * a)) / (2.0 * a))
    jac = np.array([[-2.0 * a * x_star, 1.0], [b, 0.0]])
    lam = max(abs(np.linalg.eigvals(jac)))
    tr = lyapunov_henon(HenonParams(a, b), n=10**5)
    assert tr.estimate < 0.0
    assert tr.estimate == pytest.approx(math.log(lam), abs=1e-2)


def test_renormalized_matches_naive_product():
    tr = lyapunov_henon(HenonParams(1.4, 0.3), n=500)
    naive = _kernels.henon_cocycle_naive(1.4, 0.3, 0.0, 0.0, 0.0, 1.0, 500)
    assert tr.log_norms[-1] == pytest.approx(math.log(naive), abs=1e-9)


def test_generic_exponent_at_fixed_start():
    tr = lyapunov_generic(QuadraticParams(2.0), -1.0, 1000)
    assert tr.estimate == pytest.approx(math.log(4.0), abs=1e-12)


def test_generic_exponent_in_attractor_basin():
    for x0 in (-0.4, 0.3, 0.9):
        tr = lyapunov_generic(QuadraticParams(0.5), x0, 10**4)
        assert tr.estimate == pytest.approx(math.log(math.sqrt(3.0) - 1.0), abs=1e-3)


def test_generic_exponent_rejects_out_of_range_start():
    with pytest.raises(ValueError):
        lyapunov_generic(QuadraticParams(2.0), 1.5, 100)


def test_classify_examples():
    assert classify_exponent(QuadraticParams(2.0), 10**5) is ExponentClass.POSITIVE
    assert classify_exponent(QuadraticParams(0.5), 10**5) is ExponentClass.NON_POSITIVE
    # attracting period-3 cycle just above the window opening
    assert classify_exponent(QuadraticParams(1.76), 10**5) is ExponentClass.NON_POSITIVE
    assert classify_exponent(QuadraticParams(1.0), 10**4) is ExponentClass.HIT_CRITICAL
    assert classify_exponent(QuadraticParams(3.0), 10**4) is ExponentClass.ESCAPED


def test_classify_budget_precondition():
    with pytest.raises(ValueError):
        classify_exponent(QuadraticParams(2.0), budget=10)


def test_classify_agrees_between_families_at_b0():
    budget = 10**4
    for a in np.linspace(0.05, 2.0, 100):
        q_cls = classify_exponent(QuadraticParams(float(a)), budget)
        h_cls = classify_exponent(HenonParams(float(a), 0.0), budget)
        assert q_cls is h_cls, f"a={a}: {q_cls} != {h_cls}"


def test_exponent_scan_matches_pointwise_classify():
    grid = np.linspace(1.4, 2.0, 64)
    scan = exponent_scan(grid, budget=2 * 10**4)
    for a, cls in zip(grid, scan.classes()):
        assert classify_exponent(QuadraticParams(float(a)), 2 * 10**4) is cls
