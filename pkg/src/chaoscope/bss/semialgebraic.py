"""Symbolic path enumeration: each halting computation path contributes one
basic set (a conjunction of strict and non-strict polynomial inequalities
over the input variables), and the halting set is the union over paths.

Along a path, assignments substitute exactly (rational arithmetic), so locals
are fully eliminated; branch conditions append in the normal form h < 0 or
h <= 0, with the sign flipped on the refused edge.  Constant conditions are
decided exactly instead of recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .polynomial import DegreeOverflowError, Poly
from .program import Branch, Compute, Goto, Halt, Input, Program

MAX_DEGREE = 64
DEFAULT_MAX_DEPTH = 32


@dataclass(frozen=True)
class BasicSemiAlgebraicSet:
    """Conjunction of h < 0 (strict) and h <= 0 (nonstrict) constraints over
    the input variables; path_steps is the halting path's length."""

    strict: Tuple[Poly, ...]
    nonstrict: Tuple[Poly, ...]
    path_steps: int = 0

    def contains_exact(self, point: Sequence[Fraction]) -> bool:
        point = [Fraction(v) for v in point]
        for h in self.strict:
            if not h.eval_exact(point) < 0:
                return False
        for h in self.nonstrict:
            if not h.eval_exact(point) <= 0:
                return False
        return True


@dataclass
class HaltingSetDescription:
    pieces: List[BasicSemiAlgebraicSet]
    truncated: bool
    input_variables: Tuple[str, ...]

    def contains_exact(self, point: Sequence[Fraction], max_steps: Optional[int] = None) -> bool:
        """Exact membership of the union; restrict to pieces whose halting
        path is no longer than max_steps when given."""
        for piece in self.pieces:
            if max_steps is not None and piece.path_steps > max_steps:
                continue
            if piece.contains_exact(point):
                return True
        return False


def enumerate_paths(
    prog: Program,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_degree: int = MAX_DEGREE,
) -> HaltingSetDescription:
    """Depth-first traversal of the computation tree up to max_depth steps.

    Raises DegreeOverflowError (naming the node) if a substitution exceeds
    max_degree.  Paths cut by the depth limit set truncated=True.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    nvars = len(prog.variables)
    n_inputs = prog.arity
    identity = [Poly.variable(nvars, i) for i in range(n_inputs)]
    zero = Poly.constant(nvars, 0)
    start_env: Tuple[Poly, ...] = tuple(identity + [zero] * (nvars - n_inputs))

    pieces: List[BasicSemiAlgebraicSet] = []
    truncated = False
    # explicit DFS stack; the true edge of a branch is explored first
    stack: List[Tuple[int, Tuple[Poly, ...], Tuple[Poly, ...], Tuple[Poly, ...], int]] = [
        (0, start_env, (), (), 0)
    ]
    while stack:
        pc, env, strict, nonstrict, steps = stack.pop()
        if steps >= max_depth:
            truncated = True
            continue
        node = prog.nodes[pc]
        steps += 1
        if isinstance(node, Input):
            stack.append((pc + 1, env, strict, nonstrict, steps))
        elif isinstance(node, Compute):
            try:
                value = node.expr.compose(env, max_degree)
            except DegreeOverflowError as exc:
                raise DegreeOverflowError(f"node {pc}: {exc}") from None
            new_env = list(env)
            new_env[node.target_index] = value
            stack.append((pc + 1, tuple(new_env), strict, nonstrict, steps))
        elif isinstance(node, Branch):
            cond = node.expr.compose(env, max_degree)
            if cond.is_constant():
                v = cond.constant_value()
                taken = (v < 0) if node.strict else (v <= 0)
                target = node.then_target if taken else node.else_target
                stack.append((target, env, strict, nonstrict, steps))
            else:
                # refused edge first so the taken edge pops first (DFS order)
                if node.strict:
                    stack.append((node.else_target, env, strict, nonstrict + (-cond,), steps))
                    stack.append((node.then_target, env, strict + (cond,), nonstrict, steps))
                else:
                    stack.append((node.else_target, env, strict + (-cond,), nonstrict, steps))
                    stack.append((node.then_target, env, strict, nonstrict + (cond,), steps))
        elif isinstance(node, Halt):
            pieces.append(BasicSemiAlgebraicSet(strict, nonstrict, steps))
        else:  # Goto
            stack.append((node.target, env, strict, nonstrict, steps))
    return HaltingSetDescription(pieces, truncated, prog.input_variables)


def serialize_description(desc: HaltingSetDescription) -> str:
    """Structured text: one block per piece, one inequality per line, exact
    rational coefficients rendered as num/den."""
    lines = [
        f"inputs: {' '.join(desc.input_variables)}",
        f"pieces: {len(desc.pieces)}",
        f"truncated: {'yes' if desc.truncated else 'no'}",
    ]
    names = desc.input_variables
    for i, piece in enumerate(desc.pieces):
        lines.append(f"piece {i} (path length {piece.path_steps})")
        for h in piece.strict:
            lines.append(f"  {h.format(names)} < 0")
        for h in piece.nonstrict:
            lines.append(f"  {h.format(names)} <= 0")
        if not piece.strict and not piece.nonstrict:
            lines.append("  (no constraints)")
    return "\n".join(lines) + "\n"
