"""Exact real-root isolation for univariate rational polynomials.

The method is recursive: roots of the derivative cut the line into monotone
segments, signs at the cut points are certified with a derivative-magnitude
bound, and each sign change then brackets exactly one root, refined by
bisection on dyadic endpoints.  All arithmetic is exact (Fractions); nothing
is ever guessed, and queries that cannot be resolved within the iteration cap
raise UnresolvedRootError instead of returning an approximation.

Dense representation: a tuple of Fractions, index = power.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Dense = Tuple[Fraction, ...]

REFINE_CAP = 400


class UnresolvedRootError(RuntimeError):
    """Subdivision hit the precision cap without separating roots."""


# ---------------------------------------------------------------------------
# dense polynomial helpers
# ---------------------------------------------------------------------------


def trim(p: Sequence[Fraction]) -> Dense:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Dense) -> int:
    return len(p) - 1


def evaluate(p: Dense, x: Fraction) -> Fraction:
    total = Fraction(0)
    for c in reversed(p):
        total = total * x + c
    return total


def derivative(p: Dense) -> Dense:
    return trim(tuple(c * i for i, c in enumerate(p) if i > 0))


def divmod_exact(num: Dense, den: Dense) -> Tuple[Dense, Dense]:
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    num_l = list(num)
    q = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    dn = degree(den)
    lead = den[-1]
    for k in range(len(num) - len(den), -1, -1):
        coeff = num_l[k + dn] / lead
        q[k] = coeff
        if coeff:
            for j, c in enumerate(den):
                num_l[k + j] -= coeff * c
    return trim(q), trim(num_l)


def gcd_poly(a: Dense, b: Dense) -> Dense:
    """Monic gcd via the Euclidean algorithm."""
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_exact(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return tuple(c / lead for c in a)


def squarefree_part(p: Dense) -> Dense:
    p = trim(p)
    if degree(p) < 1:
        return p
    g = gcd_poly(p, derivative(p))
    if degree(g) < 1:
        return p
    q, r = divmod_exact(p, g)
    assert not r
    return q


def root_bound(p: Dense) -> Fraction:
    """Dyadic bound exceeding the absolute value of every root."""
    p = trim(p)
    if degree(p) < 1:
        return Fraction(1)
    lead = abs(p[-1])
    cauchy = Fraction(1) + max(abs(c) for c in p[:-1]) / lead if len(p) > 1 else Fraction(1)
    b = Fraction(1)
    while b < cauchy:
        b *= 2
    return b * 2


def _abs_coeff_bound(p: Dense, lo: Fraction, hi: Fraction) -> Fraction:
    """Crude bound on |p| over [lo, hi]."""
    m = max(abs(lo), abs(hi), Fraction(1))
    total = Fraction(0)
    power = Fraction(1)
    for c in p:
        total += abs(c) * power
        power *= m
    return total


def certify_no_root(p: Dense, lo: Fraction, hi: Fraction) -> bool:
    """True when |p| at an endpoint exceeds the maximal possible variation of
    p across [lo, hi], which proves p has no zero there."""
    v_lo, v_hi = evaluate(p, lo), evaluate(p, hi)
    if v_lo == 0 or v_hi == 0 or (v_lo < 0) != (v_hi < 0):
        return False
    slope = _abs_coeff_bound(derivative(p), lo, hi)
    return min(abs(v_lo), abs(v_hi)) > slope * (hi - lo)


# ---------------------------------------------------------------------------
# isolated roots
# ---------------------------------------------------------------------------


class RootPoint:
    """One real root, either an exact rational or a shrinking open bracket of
    a squarefree polynomial with a sign change across it."""

    __slots__ = ("poly", "lo", "hi", "exact")

    def __init__(self, poly: Optional[Dense], lo: Fraction, hi: Fraction, exact: bool):
        self.poly = poly
        self.lo = lo
        self.hi = hi
        self.exact = exact

    @classmethod
    def rational(cls, value: Fraction) -> "RootPoint":
        return cls(None, value, value, True)

    @classmethod
    def bracketed(cls, poly: Dense, lo: Fraction, hi: Fraction) -> "RootPoint":
        s_lo = evaluate(poly, lo)
        s_hi = evaluate(poly, hi)
        assert s_lo != 0 and s_hi != 0 and (s_lo < 0) != (s_hi < 0)
        return cls(poly, lo, hi, False)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self) -> None:
        """One bisection step; collapses to an exact root on a lucky hit."""
        if self.exact:
            return
        mid = (self.lo + self.hi) / 2
        v = evaluate(self.poly, mid)
        if v == 0:
            self.lo = self.hi = mid
            self.exact = True
            return
        if (v < 0) != (evaluate(self.poly, self.lo) < 0):
            self.hi = mid
        else:
            self.lo = mid

    def __repr__(self):
        if self.exact:
            return f"RootPoint({self.lo})"
        return f"RootPoint(({self.lo}, {self.hi}))"


def _refine_until_certified(root: RootPoint, h: Dense) -> None:
    """Shrink the bracket until h provably has no zero on it."""
    for _ in range(REFINE_CAP):
        if root.exact or certify_no_root(h, root.lo, root.hi):
            return
        root.refine()
    raise UnresolvedRootError("certification exceeded the refinement cap")


def _move_endpoint_inward(root: RootPoint, left: bool) -> None:
    """Shrink the bracket at a quarter point so the named endpoint eventually
    moves; plain bisection can leave an endpoint in place indefinitely."""
    m = (3 * root.lo + root.hi) / 4 if left else (root.lo + 3 * root.hi) / 4
    v = evaluate(root.poly, m)
    if v == 0:
        root.lo = root.hi = m
        root.exact = True
        return
    if (v < 0) != (evaluate(root.poly, root.lo) < 0):
        root.hi = m
    else:
        root.lo = m


def sign_at(h: Sequence[Fraction], root: RootPoint) -> int:
    """Exact sign of the polynomial h at the root point."""
    h = trim(h)
    if not h:
        return 0
    if root.exact:
        v = evaluate(h, root.lo)
        return 0 if v == 0 else (1 if v > 0 else -1)
    g = gcd_poly(root.poly, h)
    if degree(g) >= 1:
        # the bracket holds exactly one root of root.poly; if g changes sign
        # there, that root is shared with h
        g_lo, g_hi = evaluate(g, root.lo), evaluate(g, root.hi)
        if (g_lo < 0) != (g_hi < 0):
            return 0
    _refine_until_certified(root, h)
    if root.exact:
        return sign_at(h, root)
    v = evaluate(h, root.lo)
    return 1 if v > 0 else -1


def compare_roots(r1: RootPoint, r2: RootPoint) -> int:
    """Total order on root points: -1, 0 (same real number), or +1."""
    if r1.exact and r2.exact:
        return (r1.lo > r2.lo) - (r1.lo < r2.lo)
    if r1.exact:
        return -compare_roots(r2, r1)
    if r2.exact:
        # r2 is rational; is it the root inside r1's bracket?
        if r1.lo < r2.lo < r1.hi and evaluate(r1.poly, r2.lo) == 0:
            return 0
        for _ in range(REFINE_CAP):
            if r1.hi <= r2.lo:
                return -1
            if r1.lo >= r2.lo:
                return 1
            r1.refine()
            if r1.exact:
                return compare_roots(r1, r2)
        raise UnresolvedRootError("comparison exceeded the refinement cap")
    g = gcd_poly(r1.poly, r2.poly)
    for _ in range(REFINE_CAP):
        if r1.hi <= r2.lo:
            return -1
        if r2.hi <= r1.lo:
            return 1
        if degree(g) >= 1:
            lo = max(r1.lo, r2.lo)
            hi = min(r1.hi, r2.hi)
            if lo < hi:
                g_lo, g_hi = evaluate(g, lo), evaluate(g, hi)
                if g_lo == 0 or g_hi == 0:
                    # a rational endpoint is the shared root candidate
                    w = lo if g_lo == 0 else hi
                    if evaluate(r1.poly, w) == 0 and evaluate(r2.poly, w) == 0:
                        return 0
                elif (g_lo < 0) != (g_hi < 0):
                    return 0
        (r1 if r1.width >= r2.width else r2).refine()
        if r1.exact or r2.exact:
            return compare_roots(r1, r2)
    raise UnresolvedRootError("comparison exceeded the refinement cap")


# ---------------------------------------------------------------------------
# isolation
# ---------------------------------------------------------------------------


def _bisect_bracket(p: Dense, lo: Fraction, hi: Fraction, rounds: int = 2) -> RootPoint:
    root = RootPoint.bracketed(p, lo, hi)
    for _ in range(rounds):
        if root.exact:
            break
        root.refine()
    return root


def isolate_real_roots(p: Sequence[Fraction]) -> List[RootPoint]:
    """All real roots of p, sorted increasing, pairwise disjoint."""
    p = trim(tuple(Fraction(c) for c in p))
    if degree(p) < 1:
        return []
    q = squarefree_part(p)
    n = degree(q)
    if n == 1:
        return [RootPoint.rational(-q[0] / q[1])]

    dq = derivative(q)
    crits = isolate_real_roots(dq)
    bound = max(root_bound(q), root_bound(dq))

    # ladder of points with certified nonzero sign of q:
    # -bound, (each critical point), +bound
    ladder: List[Tuple[RootPoint, int]] = []
    exact_roots: List[RootPoint] = []
    for c in crits:
        if c.exact:
            v = evaluate(q, c.lo)
            assert v != 0, "squarefree part shares a root with its derivative"
            ladder.append((c, 1 if v > 0 else -1))
        else:
            # q has no root at a critical point of its squarefree self, so
            # certification terminates; endpoints hitting a root of q exactly
            # are recorded, then pushed strictly inside the bracket
            for _ in range(REFINE_CAP):
                if evaluate(q, c.lo) == 0:
                    exact_roots.append(RootPoint.rational(c.lo))
                    _move_endpoint_inward(c, left=True)
                    continue
                if evaluate(q, c.hi) == 0:
                    exact_roots.append(RootPoint.rational(c.hi))
                    _move_endpoint_inward(c, left=False)
                    continue
                if c.exact or certify_no_root(q, c.lo, c.hi):
                    break
                c.refine()
            else:
                raise UnresolvedRootError("sign certification exceeded the cap")
            if c.exact:
                v = evaluate(q, c.lo)
                assert v != 0, "squarefree part shares a root with its derivative"
            else:
                v = evaluate(q, c.lo)
            ladder.append((c, 1 if v > 0 else -1))

    v_lo = evaluate(q, -bound)
    v_hi = evaluate(q, bound)
    points: List[Tuple[Fraction, Fraction, int]] = [(-bound, -bound, 1 if v_lo > 0 else -1)]
    for c, s in ladder:
        points.append((c.lo, c.hi, s))
    points.append((bound, bound, 1 if v_hi > 0 else -1))

    roots = list(exact_roots)
    for (l1, h1, s1), (l2, h2, s2) in zip(points, points[1:]):
        if s1 != s2:
            roots.append(_bisect_bracket(q, h1, l2))
    roots.sort(key=lambda r: (r.lo, r.hi))
    # exact roots discovered at bracket endpoints may duplicate a bracket
    deduped: List[RootPoint] = []
    for r in roots:
        if deduped and compare_roots(deduped[-1], r) == 0:
            continue
        deduped.append(r)
    return deduped
