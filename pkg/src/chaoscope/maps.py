"""The two map families: x -> 1 - a*x^2 on the line and its planar unfolding
(x, y) -> (1 - a*x^2 + y, b*x).

Evaluation order inside each formula is fixed (``1.0 - a*(x*x) + y``) so that
the b=0 restriction of the planar family reproduces the interval map bitwise.
All values here are immutable and all functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union

import numpy as np

# Orbits leaving this radius are classified "escaped"; it safely exceeds the
# invariant region for a <= 2 and small |b|.
ESCAPE_RADIUS = 10.0

# Default half-width of the b-window used by classification runs.
HENON_B_MAX = 0.4


@dataclass(frozen=True)
class QuadraticParams:
    """Parameter of the interval map x -> 1 - a*x^2."""

    a: float

    def in_classification_window(self) -> bool:
        """True when a lies in the (0, 2] window used by classification runs."""
        return 0.0 < self.a <= 2.0


@dataclass(frozen=True)
class HenonParams:
    """Parameters of the planar map (x, y) -> (1 - a*x^2 + y, b*x)."""

    a: float
    b: float

    def in_classification_window(self, b_max: float = HENON_B_MAX) -> bool:
        return 0.0 < self.a <= 2.0 and abs(self.b) < b_max


ParameterPoint = Union[QuadraticParams, HenonParams]


@dataclass(frozen=True)
class OrbitState:
    """One point along an orbit; `y` is None for the interval family."""

    x: float
    y: Optional[float]
    step: int
    escaped: bool = False

    @property
    def point(self):
        return self.x if self.y is None else (self.x, self.y)


def quad_apply(p: QuadraticParams, x: float) -> float:
    """One application of the interval map: 1 - a*x^2."""
    return 1.0 - p.a * (x * x)


def quad_derivative(p: QuadraticParams, x: float) -> float:
    """Derivative of the interval map: -2*a*x."""
    return -2.0 * p.a * x


def critical_point(p: QuadraticParams) -> float:
    """The unique turning point of the interval map."""
    return 0.0


def critical_value(p: QuadraticParams) -> float:
    """Image of the turning point; the reference orbit starts here."""
    return 1.0


def henon_apply(p: HenonParams, z: Tuple[float, float]) -> Tuple[float, float]:
    """One application of the planar map."""
    x, y = z
    return (1.0 - p.a * (x * x) + y, p.b * x)


def henon_jacobian(p: HenonParams, z: Tuple[float, float]) -> np.ndarray:
    """Jacobian [[-2*a*x, 1], [b, 0]]; its determinant is -b at every z."""
    x, _ = z
    return np.array([[-2.0 * p.a * x, 1.0], [p.b, 0.0]])


def invariant_interval(p: QuadraticParams) -> Tuple[float, float]:
    """[1-a, 1], the interval that absorbs every bounded orbit for 0 < a <= 2."""
    return (1.0 - p.a, 1.0)


def iterate(
    params: ParameterPoint,
    start,
    n: int,
    escape_radius: float = ESCAPE_RADIUS,
) -> Iterator[OrbitState]:
    """Yield the start state and up to n successors, stopping early once the
    orbit leaves the escape radius (final state carries escaped=True).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if isinstance(params, QuadraticParams):
        x = float(start)
        state = OrbitState(x, None, 0, escaped=not abs(x) <= escape_radius)
        yield state
        if state.escaped:
            return
        for k in range(1, n + 1):
            x = quad_apply(params, x)
            escaped = not abs(x) <= escape_radius
            yield OrbitState(x, None, k, escaped=escaped)
            if escaped:
                return
    elif isinstance(params, HenonParams):
        x, y = (float(start[0]), float(start[1]))
        state = OrbitState(x, y, 0, escaped=not math.hypot(x, y) <= escape_radius)
        yield state
        if state.escaped:
            return
        for k in range(1, n + 1):
            x, y = henon_apply(params, (x, y))
            escaped = not math.hypot(x, y) <= escape_radius
            yield OrbitState(x, y, k, escaped=escaped)
            if escaped:
                return
    else:
        raise TypeError(f"unsupported parameter point: {params!r}")
