import math

import numpy as np
import pytest

from chaoscope.maps import (
    ESCAPE_RADIUS,
    HenonParams,
    QuadraticParams,
    henon_apply,
    henon_jacobian,
    invariant_interval,
    iterate,
    quad_apply,
    quad_derivative,
)


def test_quad_apply_fixed_point():
    assert quad_apply(QuadraticParams(2.0), 0.5) == 0.5


def test_quad_apply_critical_value_lands_on_fixed_point():
    p = QuadraticParams(2.0)
    assert quad_apply(p, 1.0) == -1.0
    assert quad_apply(p, -1.0) == -1.0


def test_quad_apply_superstable_two_loop():
    p = QuadraticParams(1.0)
    assert quad_apply(p, 0.0) == 1.0
    assert quad_apply(p, 1.0) == 0.0


def test_quad_derivative_values():
    assert quad_derivative(QuadraticParams(2.0), 1.0) == -4.0
    for a in (0.3, 1.0, 1.7, 2.0):
        assert quad_derivative(QuadraticParams(a), 0.0) == 0.0


def test_quad_derivative_at_fixed_point_matches_closed_form():
    # fixed point (-1 + sqrt(1+4a)) / (2a) has multiplier 1 - sqrt(1+4a)
    a = 0.5
    x_star = (-1.0 + math.sqrt(1.0 + 4.0 * a)) / (2.0 * a)
    assert x_star == pytest.approx(0.7320508, abs=1e-7)
    mult = quad_derivative(QuadraticParams(a), x_star)
    assert mult == pytest.approx(1.0 - math.sqrt(3.0), rel=1e-12)


def test_henon_apply_examples():
    assert henon_apply(HenonParams(0.77, -0.2), (0.0, 0.0)) == (1.0, 0.0)
    assert henon_apply(HenonParams(2.0, 0.0), (1.0, 0.0)) == (-1.0, 0.0)
    p = HenonParams(1.4, 0.3)
    z1 = henon_apply(p, (0.0, 0.0))
    assert z1 == (1.0, 0.0)
    z2 = henon_apply(p, z1)
    assert z2[0] == pytest.approx(-0.4, rel=1e-15)
    assert z2[1] == 0.3


def test_henon_jacobian_entries():
    j = henon_jacobian(HenonParams(2.0, 0.0), (1.0, 0.0))
    assert np.array_equal(j, [[-4.0, 1.0], [0.0, 0.0]])
    j0 = henon_jacobian(HenonParams(1.1, 0.25), (0.0, 5.0))
    assert np.array_equal(j0, [[0.0, 1.0], [0.25, 0.0]])


def test_henon_jacobian_determinant_is_minus_b_exactly():
    rng = np.random.default_rng(3)
    p = HenonParams(1.4, 0.3)
    for _ in range(1000):
        x, y = rng.uniform(-2, 2, 2)
        j = henon_jacobian(p, (x, y))
        det = j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0]
        assert det == -p.b


def test_doubling_conjugacy_at_a_two():
    # Q_2(cos u) = -cos(2u)
    rng = np.random.default_rng(12)
    p = QuadraticParams(2.0)
    for u in rng.uniform(0.0, 2.0 * math.pi, 1000):
        assert quad_apply(p, math.cos(u)) == pytest.approx(-math.cos(2.0 * u), abs=1e-12)


def test_henon_b0_restriction_is_bitwise():
    # first coordinate from step 1 onward equals the interval orbit of 1-a*x^2
    a = 1.732
    hp = HenonParams(a, 0.0)
    qp = QuadraticParams(a)
    for x0 in (-0.9, 0.1, 0.73, 1.0):
        henon_states = list(iterate(hp, (x0, 0.0), 60))
        x = quad_apply(qp, x0)
        quad_states = [x]
        for _ in range(59):
            x = quad_apply(qp, x)
            quad_states.append(x)
        for h_state, q_val in zip(henon_states[1:], quad_states):
            assert h_state.x == q_val  # bitwise


def test_iterate_superstable_sequence():
    states = list(iterate(QuadraticParams(1.0), 0.0, 4))
    assert [s.x for s in states] == [0.0, 1.0, 0.0, 1.0, 0.0]
    assert [s.step for s in states] == [0, 1, 2, 3, 4]


def test_iterate_eventually_fixed():
    states = list(iterate(QuadraticParams(2.0), 1.0, 3))
    assert [s.x for s in states] == [1.0, -1.0, -1.0, -1.0]


def test_iterate_escape_flag():
    # |x| grows monotonically once past the escape threshold
    states = list(iterate(QuadraticParams(2.0), 3.0, 50))
    assert states[-1].escaped
    assert len(states) < 51
    assert abs(states[-1].x) > ESCAPE_RADIUS
    assert not any(s.escaped for s in states[:-1])


def test_iterate_is_pure():
    a = list(iterate(QuadraticParams(1.9), 0.2, 100))
    b = list(iterate(QuadraticParams(1.9), 0.2, 100))
    assert [s.x for s in a] == [s.x for s in b]
    h1 = list(iterate(HenonParams(1.4, 0.3), (0.1, 0.0), 100))
    h2 = list(iterate(HenonParams(1.4, 0.3), (0.1, 0.0), 100))
    assert [(s.x, s.y) for s in h1] == [(s.x, s.y) for s in h2]


def test_invariant_interval():
    assert invariant_interval(QuadraticParams(2.0)) == (-1.0, 1.0)
    assert invariant_interval(QuadraticParams(0.5)) == (0.5, 1.0)
