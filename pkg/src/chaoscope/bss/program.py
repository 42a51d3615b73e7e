"""A small register language over the reals and its interpreter.

Line-oriented grammar (one statement per line, `#` starts a comment, node
indices are the 0-based ordinals of the statement lines):

    input <var> [<var> ...]          -- exactly one, at node 0
    <var> = <polyexpr>               -- polynomial assignment
    branch <polyexpr> < 0 ? T : F    -- strict sign test, targets are indices
    branch <polyexpr> <= 0 ? T : F   -- non-strict sign test
    halt <var> [<var> ...]           -- stop, output the listed variables
    goto <idx>
    loop                             -- sugar for `goto` to the node itself

Polynomial expressions use + - * / ^ (also **), parentheses, integer or
decimal literals, and rational literals like 3/2; division is only allowed by
a nonzero constant, which keeps every right-hand side a polynomial.

Execution applies polynomials in 64-bit floating point; comparisons are exact
on the computed values.  One node visit costs one unit of fuel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .polynomial import Poly


class BssError(ValueError):
    pass


class BssSyntaxError(BssError):
    def __init__(self, message: str, line: int, col: int = 0):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class BssSemanticError(BssError):
    def __init__(self, message: str, node: int):
        super().__init__(f"node {node}: {message}")
        self.node = node


@dataclass(frozen=True)
class Input:
    variables: Tuple[str, ...]


@dataclass(frozen=True)
class Compute:
    target: str
    target_index: int
    expr: Poly


@dataclass(frozen=True)
class Branch:
    expr: Poly
    strict: bool  # True: expr < 0, False: expr <= 0
    then_target: int
    else_target: int


@dataclass(frozen=True)
class Halt:
    variables: Tuple[str, ...]
    variable_indices: Tuple[int, ...]


@dataclass(frozen=True)
class Goto:
    target: int


Node = Union[Input, Compute, Branch, Halt, Goto]


@dataclass(frozen=True)
class Program:
    nodes: Tuple[Node, ...]
    variables: Tuple[str, ...]       # inputs first, then assigned locals
    input_variables: Tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.input_variables)


# ---------------------------------------------------------------------------
# expression parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str, line: int):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise BssSyntaxError(f"bad character {text[pos]!r}", line, pos + 1)
        if m.lastgroup == "num":
            tokens.append(("num", Fraction(m.group("num")), m.start("num")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op, m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _ExprParser:
    """Recursive descent over + - * / ^ with unary minus; produces a Poly."""

    def __init__(self, tokens, nvars: int, var_index, line: int):
        self.tokens = tokens
        self.i = 0
        self.nvars = nvars
        self.var_index = var_index
        self.line = line

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        raise BssSyntaxError(message, self.line, self.peek()[2] + 1)

    def parse(self) -> Poly:
        out = self.sum()
        if self.peek()[0] != "end":
            self.fail("trailing input after expression")
        return out

    def sum(self) -> Poly:
        kind, val, _ = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.next()
            negate = val == "-"
        out = self.product()
        if negate:
            out = -out
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.product()
                out = out - rhs if val == "-" else out + rhs
            else:
                return out

    def product(self) -> Poly:
        out = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.power()
                if val == "*":
                    out = out * rhs
                else:
                    if not rhs.is_constant() or rhs.constant_value() == 0:
                        self.fail("division is only allowed by a nonzero constant")
                    out = out.scale(Fraction(1) / rhs.constant_value())
            else:
                return out

    def power(self) -> Poly:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            nkind, nval, _ = self.peek()
            neg = False
            if nkind == "op" and nval == "-":
                self.next()
                neg = True
            ekind, eval_, _ = self.next()
            if ekind != "num" or eval_.denominator != 1:
                self.fail("exponent must be a nonnegative integer")
            if neg:
                self.fail("negative exponents are not polynomial")
            return base.pow(int(eval_))
        return base

    def atom(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "num":
            self.next()
            return Poly.constant(self.nvars, val)
        if kind == "name":
            self.next()
            if val not in self.var_index:
                self.fail(f"unknown variable {val!r}")
            return Poly.variable(self.nvars, self.var_index[val])
        if kind == "op" and val == "(":
            self.next()
            out = self.sum()
            kind, val, _ = self.next()
            if not (kind == "op" and val == ")"):
                self.fail("expected ')'")
            return out
        if kind == "op" and val == "-":
            self.next()
            return -self.atom()
        self.fail("expected a number, variable, or '('")


# ---------------------------------------------------------------------------
# program parsing
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")
_BRANCH_RE = re.compile(r"^branch\s+(?P<expr>.*?)\s*(?P<cmp><=|<)\s*0\s*\?\s*(?P<t>\d+)\s*:\s*(?P<f>\d+)\s*$")


def parse_program(text: str) -> Program:
    """Parse and validate a program; raises BssSyntaxError / BssSemanticError."""
    statements: List[Tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            statements.append((lineno, stripped))
    if not statements:
        raise BssSyntaxError("empty program", 1, 1)

    # first pass: collect the variable universe (inputs, then assignments)
    variables: List[str] = []
    input_vars: List[str] = []
    for node_idx, (lineno, stmt) in enumerate(statements):
        head = stmt.split(None, 1)[0]
        if head == "input":
            names = stmt.split()[1:]
            if node_idx != 0:
                raise BssSemanticError("input must be the node at position 0", node_idx)
            if not names:
                raise BssSyntaxError("input needs at least one variable", lineno)
            for nm in names:
                if not _NAME_RE.match(nm):
                    raise BssSyntaxError(f"bad variable name {nm!r}", lineno)
                if nm in variables:
                    raise BssSyntaxError(f"duplicate input variable {nm!r}", lineno)
                variables.append(nm)
                input_vars.append(nm)
        elif "=" in stmt and not stmt.startswith(("branch", "goto", "halt", "loop")):
            target = stmt.split("=", 1)[0].strip()
            if not _NAME_RE.match(target):
                raise BssSyntaxError(f"bad assignment target {target!r}", lineno)
            if target not in variables:
                variables.append(target)
    if not input_vars:
        raise BssSemanticError("program has no input node", 0)

    var_index = {nm: i for i, nm in enumerate(variables)}
    nvars = len(variables)
    n_nodes = len(statements)

    def check_target(t: int, node_idx: int) -> int:
        if not 0 <= t < n_nodes:
            raise BssSemanticError(f"invalid target {t}", node_idx)
        return t

    nodes: List[Node] = []
    defined = set(input_vars)
    for node_idx, (lineno, stmt) in enumerate(statements):
        head = stmt.split(None, 1)[0]
        if head == "input":
            nodes.append(Input(tuple(input_vars)))
            continue
        if head == "branch":
            m = _BRANCH_RE.match(stmt)
            if m is None:
                raise BssSyntaxError("expected `branch <expr> <0|<=0 ? T : F`", lineno)
            expr = _ExprParser(_tokenize(m.group("expr"), lineno), nvars, var_index, lineno).parse()
            for i in expr.variables_used():
                if variables[i] not in defined:
                    raise BssSemanticError(f"variable {variables[i]!r} read before it is written", node_idx)
            nodes.append(
                Branch(
                    expr,
                    strict=m.group("cmp") == "<",
                    then_target=check_target(int(m.group("t")), node_idx),
                    else_target=check_target(int(m.group("f")), node_idx),
                )
            )
            continue
        if head == "halt":
            names = stmt.split()[1:]
            if not names:
                raise BssSyntaxError("halt needs at least one output variable", lineno)
            for nm in names:
                if nm not in var_index:
                    raise BssSemanticError(f"unknown output variable {nm!r}", node_idx)
                if nm not in defined:
                    raise BssSemanticError(f"variable {nm!r} read before it is written", node_idx)
            nodes.append(Halt(tuple(names), tuple(var_index[nm] for nm in names)))
            continue
        if head == "goto":
            parts = stmt.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise BssSyntaxError("expected `goto <idx>`", lineno)
            nodes.append(Goto(check_target(int(parts[1]), node_idx)))
            continue
        if head == "loop":
            if stmt != "loop":
                raise BssSyntaxError("expected bare `loop`", lineno)
            nodes.append(Goto(node_idx))
            continue
        if "=" in stmt:
            target, rhs = (s.strip() for s in stmt.split("=", 1))
            expr = _ExprParser(_tokenize(rhs, lineno), nvars, var_index, lineno).parse()
            for i in expr.variables_used():
                if variables[i] not in defined:
                    raise BssSemanticError(f"variable {variables[i]!r} read before it is written", node_idx)
            defined.add(target)
            nodes.append(Compute(target, var_index[target], expr))
            continue
        raise BssSyntaxError(f"unrecognized statement {stmt!r}", lineno)

    return Program(tuple(nodes), tuple(variables), tuple(input_vars))


# ---------------------------------------------------------------------------
# interpretation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Halted:
    outputs: Tuple[float, ...]
    steps: int


class OutOfFuel:
    """Singleton result for executions that exhaust their fuel."""

    _instance: Optional["OutOfFuel"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OutOfFuel"


OUT_OF_FUEL = OutOfFuel()


def run(prog: Program, inputs: Sequence[float], fuel: int) -> Union[Halted, OutOfFuel]:
    """Deterministic small-step execution in 64-bit floating point."""
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    if len(inputs) != prog.arity:
        raise ValueError(f"expected {prog.arity} inputs, got {len(inputs)}")
    env = [0.0] * len(prog.variables)
    for i, v in enumerate(inputs):
        env[i] = float(v)
    pc = 0
    steps = 0
    while steps < fuel:
        node = prog.nodes[pc]
        steps += 1
        if isinstance(node, Input):
            pc += 1
        elif isinstance(node, Compute):
            env[node.target_index] = node.expr.eval_float(env)
            pc += 1
        elif isinstance(node, Branch):
            v = node.expr.eval_float(env)
            taken = (v < 0.0) if node.strict else (v <= 0.0)
            pc = node.then_target if taken else node.else_target
        elif isinstance(node, Halt):
            return Halted(tuple(env[i] for i in node.variable_indices), steps)
        else:  # Goto
            pc = node.target
    return OUT_OF_FUEL
