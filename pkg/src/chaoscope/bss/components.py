"""Connected-component counting for one-variable halting-set descriptions.

The constraint polynomials' real roots cut the line into elementary regions
(open intervals and the root points themselves); membership of the union is
decided exactly on one sample per interval and at every root point, and
components are the maximal runs of member regions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .polynomial import Poly
from .realroots import (
    RootPoint,
    UnresolvedRootError,
    compare_roots,
    evaluate,
    isolate_real_roots,
    sign_at,
    trim,
)
from .semialgebraic import MAX_DEGREE, BasicSemiAlgebraicSet, HaltingSetDescription


def _to_dense(p: Poly) -> Tuple[Fraction, ...]:
    coeffs: List[Fraction] = [Fraction(0)] * (p.total_degree() + 1)
    for mono, c in p.terms.items():
        coeffs[mono[0]] += c
    return trim(tuple(coeffs))


def _piece_holds_at_sample(piece: BasicSemiAlgebraicSet, x: Fraction, dense_cache) -> bool:
    for h in piece.strict:
        if not evaluate(dense_cache[h], x) < 0:
            return False
    for h in piece.nonstrict:
        if not evaluate(dense_cache[h], x) <= 0:
            return False
    return True


def _piece_holds_at_root(piece: BasicSemiAlgebraicSet, root: RootPoint, dense_cache) -> bool:
    for h in piece.strict:
        if sign_at(dense_cache[h], root) >= 0:
            return False
    for h in piece.nonstrict:
        if sign_at(dense_cache[h], root) > 0:
            return False
    return True


def components_1d(desc: HaltingSetDescription, max_degree: int = MAX_DEGREE) -> int:
    """Number of connected components of the union of pieces, exactly.

    Requires a single input variable; raises UnresolvedRootError if root
    separation hits the precision cap (never guesses).
    """
    if len(desc.input_variables) != 1:
        raise ValueError("component counting handles exactly one input variable")
    if not desc.pieces:
        return 0

    dense_cache: Dict[Poly, Tuple[Fraction, ...]] = {}
    for piece in desc.pieces:
        for h in (*piece.strict, *piece.nonstrict):
            if h.total_degree() > max_degree:
                raise ValueError(f"constraint degree {h.total_degree()} exceeds {max_degree}")
            if h not in dense_cache:
                dense_cache[h] = _to_dense(h)

    roots: List[RootPoint] = []
    seen = set()
    for h, dense in dense_cache.items():
        key = dense
        if key in seen:
            continue
        seen.add(key)
        roots.extend(isolate_real_roots(dense))

    # sort with exact comparisons and drop duplicates across polynomials
    ordered: List[RootPoint] = []
    for r in roots:
        placed = False
        for i, s in enumerate(ordered):
            c = compare_roots(r, s)
            if c == 0:
                placed = True
                break
            if c < 0:
                ordered.insert(i, r)
                placed = True
                break
        if not placed:
            ordered.append(r)

    # interval samples strictly between consecutive roots (and beyond the ends)
    samples: List[Fraction] = []
    if not ordered:
        samples.append(Fraction(0))
    else:
        for left, right in zip(ordered, ordered[1:]):
            for _ in range(2 * 400):
                if left.hi < right.lo:
                    break
                (left if left.width >= right.width else right).refine()
            else:
                raise UnresolvedRootError("could not separate adjacent roots")
            samples.append((left.hi + right.lo) / 2)
        samples.insert(0, ordered[0].lo - 1)
        samples.append(ordered[-1].hi + 1)

    def union_at_sample(x: Fraction) -> bool:
        return any(_piece_holds_at_sample(p, x, dense_cache) for p in desc.pieces)

    def union_at_root(r: RootPoint) -> bool:
        return any(_piece_holds_at_root(p, r, dense_cache) for p in desc.pieces)

    # region sequence: interval, root, interval, ..., root, interval
    membership: List[bool] = [union_at_sample(samples[0])]
    for i, r in enumerate(ordered):
        membership.append(union_at_root(r))
        membership.append(union_at_sample(samples[i + 1]))

    count = 0
    prev = False
    for m in membership:
        if m and not prev:
            count += 1
        prev = m
    return count
