"""Boolean-algebra syntax and the algebra <-> circuit bridge.

``from_boolean`` realises each connective with its wave construction (NOT as a
pi shift, XOR as series stacking, AND/OR as a majority with a constant third
input). ``to_boolean`` reads a circuit back structurally: maximal shift chains
fold to XOR/NOT literals and merges read as majorities, specialised to And/Or
when a constant arm is syntactically present. ``eval_bool`` is an independent
evaluator used as the oracle against the circuit semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from . import circuit as ci
from .circuit import Circuit, CircuitBundle, NodeKind
from .errors import CircuitError, EvaluationError, ValidationError
from .semantics import TruthTable


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not ci.IDENT_RE.match(self.name):
            raise CircuitError(f"invalid variable identifier {self.name!r}")


@dataclass(frozen=True)
class Const:
    bit: int

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise CircuitError(f"bit must be 0 or 1, got {self.bit!r}")


@dataclass(frozen=True)
class Not:
    arg: "BoolExpr"


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Xor:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Maj:
    a: "BoolExpr"
    b: "BoolExpr"
    c: "BoolExpr"


BoolExpr = Union[Var, Const, Not, And, Or, Xor, Maj]


def eval_bool(e: BoolExpr, assignment: Mapping[str, int]) -> int:
    if isinstance(e, Var):
        if e.name not in assignment:
            raise EvaluationError(f"assignment missing variable {e.name!r}")
        return assignment[e.name] & 1
    if isinstance(e, Const):
        return e.bit
    if isinstance(e, Not):
        return 1 - eval_bool(e.arg, assignment)
    if isinstance(e, And):
        return eval_bool(e.left, assignment) & eval_bool(e.right, assignment)
    if isinstance(e, Or):
        return eval_bool(e.left, assignment) | eval_bool(e.right, assignment)
    if isinstance(e, Xor):
        return eval_bool(e.left, assignment) ^ eval_bool(e.right, assignment)
    if isinstance(e, Maj):
        s = eval_bool(e.a, assignment) + eval_bool(e.b, assignment) + eval_bool(e.c, assignment)
        return 1 if s >= 2 else 0
    raise TypeError(f"not a BoolExpr: {e!r}")


def expr_vars(e: BoolExpr) -> list[str]:
    """Variable names in left-to-right first-occurrence order."""
    seen: list[str] = []

    def walk(x):
        if isinstance(x, Var):
            if x.name not in seen:
                seen.append(x.name)
        elif isinstance(x, Not):
            walk(x.arg)
        elif isinstance(x, (And, Or, Xor)):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, Maj):
            walk(x.a)
            walk(x.b)
            walk(x.c)

    walk(e)
    return seen


def from_boolean(e: BoolExpr) -> Circuit:
    if isinstance(e, Var):
        return ci.mk_var(e.name)
    if isinstance(e, Const):
        return ci.mk_const(e.bit)
    if isinstance(e, Not):
        return ci.mk_not(from_boolean(e.arg))
    if isinstance(e, And):
        return ci.mk_and(from_boolean(e.left), from_boolean(e.right))
    if isinstance(e, Or):
        return ci.mk_or(from_boolean(e.left), from_boolean(e.right))
    if isinstance(e, Xor):
        return ci.mk_xor(from_boolean(e.left), from_boolean(e.right))
    if isinstance(e, Maj):
        return ci.mk_maj(from_boolean(e.a), from_boolean(e.b), from_boolean(e.c))
    raise TypeError(f"not a BoolExpr: {e!r}")


def to_boolean(c: Circuit) -> BoolExpr:
    """Structural readback of a single-output circuit."""
    violations = ci.validate(c)
    if violations:
        raise ValidationError(violations)
    if len(c.outputs) != 1:
        raise CircuitError("readback requires a single-output circuit")

    def read(src: int, sport: int) -> BoolExpr:
        node = c.nodes[src]
        if node.kind is NodeKind.SOURCE:
            return Const(0)
        if node.kind is NodeKind.COPY:
            e = c.in_edge(src, 0)
            return read(e.src, e.src_port)
        if node.kind is NodeKind.MERGE:
            arms = []
            for port in range(3):
                e = c.in_edge(src, port)
                arms.append(read(e.src, e.src_port))
            for i, arm in enumerate(arms):
                if isinstance(arm, Const):
                    rest = [a for j, a in enumerate(arms) if j != i]
                    op = And if arm.bit == 0 else Or
                    return op(rest[0], rest[1])
            return Maj(arms[0], arms[1], arms[2])
        # SHIFT: fold the maximal chain below this wire
        params = []
        cur = node
        while cur.kind is NodeKind.SHIFT:
            params.append(cur.param)
            e = c.in_edge(cur.id, 0)
            cur, cur_port = c.nodes[e.src], e.src_port
        base = read(cur.id, cur_port)
        expr = None if base == Const(0) else base
        parity = 0
        for p in reversed(params):  # bottom-to-top order
            if p.is_const:
                parity ^= p.phase.bit
            else:
                expr = Var(p.name) if expr is None else Xor(expr, Var(p.name))
        if parity:
            expr = Const(1) if expr is None else Not(expr)
        return expr if expr is not None else Const(0)

    e = c.in_edge(c.outputs[0], 0)
    return read(e.src, e.src_port)


def from_truth_table(tt: TruthTable) -> BoolExpr:
    """Sum-of-products synthesis for a single-output table (no minimisation)."""
    if tt.n_outputs != 1:
        raise CircuitError("synthesis requires a single-output table")
    ones = [i for i, row in enumerate(tt.rows) if row[0] == 1]
    if not ones:
        return Const(0)
    if len(ones) == len(tt.rows):
        return Const(1)
    minterms = []
    for index in ones:
        a = tt.assignment_for_row(index)
        literals = [Var(v) if a[v] else Not(Var(v)) for v in tt.vars]
        term = literals[0]
        for lit in literals[1:]:
            term = And(term, lit)
        minterms.append(term)
    expr = minterms[0]
    for term in minterms[1:]:
        expr = Or(expr, term)
    return expr


def half_adder() -> CircuitBundle:
    """Outputs (carry, sum) over inputs (a, b): carry = a AND b, sum = a XOR b."""
    carry = ci.mk_and(ci.mk_var("a"), ci.mk_var("b"))
    total = ci.mk_xor(ci.mk_var("a"), ci.mk_var("b"))
    return CircuitBundle((("carry", carry), ("sum", total)))


def full_adder() -> CircuitBundle:
    """Outputs (c_out, sum) over inputs (c_in, a, b).

    c_out is the majority of the three inputs; sum is the XOR of a and b
    composed in series with the carry-in shift.
    """
    c_out = ci.mk_maj(ci.mk_var("c_in"), ci.mk_var("a"), ci.mk_var("b"))
    total = ci.compose_series(ci.mk_xor(ci.mk_var("a"), ci.mk_var("b")), ci.mk_var("c_in"))
    return CircuitBundle((("c_out", c_out), ("sum", total)))
