"""Sparse multivariate polynomials with exact rational coefficients.

Terms map exponent tuples to Fractions; the variable universe is fixed by
position and shared across a whole machine program, so composition during
path enumeration never renames anything.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

Monomial = Tuple[int, ...]


class DegreeOverflowError(RuntimeError):
    """A symbolic product exceeded the configured degree cap."""


class Poly:
    """Immutable-by-convention polynomial over a fixed variable universe."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Monomial, Fraction]):
        self.nvars = nvars
        self.terms = {m: c for m, c in terms.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, value) -> "Poly":
        value = Fraction(value)
        return cls(nvars, {(0,) * nvars: value} if value else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Poly":
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {mono: Fraction(1)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def variables_used(self) -> Tuple[int, ...]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return tuple(sorted(used))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return Poly(self.nvars, terms)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def mul(self, other: "Poly", max_degree: int | None = None) -> "Poly":
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        out = Poly(self.nvars, terms)
        if max_degree is not None and out.total_degree() > max_degree:
            raise DegreeOverflowError(
                f"degree {out.total_degree()} exceeds the cap {max_degree}"
            )
        return out

    def __mul__(self, other: "Poly") -> "Poly":
        return self.mul(other)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self.nvars, {m: c * v for m, v in self.terms.items()})

    def pow(self, k: int, max_degree: int | None = None) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        out = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out.mul(base, max_degree)
            k >>= 1
            if k:
                base = base.mul(base, max_degree)
        return out

    # -- evaluation ----------------------------------------------------------

    def eval_exact(self, point: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    v *= Fraction(point[i]) ** e
            total += v
        return total

    def eval_float(self, point: Sequence[float]) -> float:
        total = 0.0
        for m, c in self.terms.items():
            v = float(c)
            for i, e in enumerate(m):
                if e:
                    v *= float(point[i]) ** e
            total += v
        return total

    def compose(self, substitution: Sequence["Poly"], max_degree: int | None = None) -> "Poly":
        """Substitute a polynomial for every variable."""
        out = Poly.constant(self.nvars, 0)
        cache: Dict[Tuple[int, int], Poly] = {}

        def power_of(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in cache:
                cache[key] = substitution[i].pow(e, max_degree)
            return cache[key]

        for m, c in self.terms.items():
            term = Poly.constant(self.nvars, c)
            for i, e in enumerate(m):
                if e:
                    term = term.mul(power_of(i, e), max_degree)
            out = out + term
        return out

    # -- rendering ------------------------------------------------------------

    def format(self, names: Sequence[str]) -> str:
        """Canonical text form: graded-lex term order, coefficients rendered
        as num/den when the denominator is not one."""
        if not self.terms:
            return "0"
        def key(m):
            return (sum(m), tuple(-e for e in m))
        parts = []
        for m in sorted(self.terms, key=key):
            c = self.terms[m]
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            coeff = str(c) if c.denominator != 1 else str(c.numerator)
            if factors and abs(c) == 1:
                body = "*".join(factors)
                text = body if c > 0 else f"-{body}"
            elif factors:
                text = coeff + "*" + "*".join(factors)
            else:
                text = coeff
            parts.append(text)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Poly({self.format(names)})"
