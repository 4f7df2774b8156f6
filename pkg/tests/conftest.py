"""Shared random generators for property and corpus tests (seeded, reproducible)."""

from __future__ import annotations

import random

from wavelogic import (
    And,
    Const,
    Maj,
    Not,
    Or,
    Var,
    Xor,
    compose_parallel,
    compose_series,
    from_boolean,
    mk_const,
    mk_var,
    substitute,
    variables,
)

VAR_NAMES = ["a", "b", "c", "d", "e", "f"]


def random_expr(rng: random.Random, depth: int, n_vars: int = 4, const_p: float = 0.25):
    if depth == 0 or rng.random() < 0.35:
        if rng.random() < const_p:
            return Const(rng.randint(0, 1))
        return Var(rng.choice(VAR_NAMES[:n_vars]))
    op = rng.choice(["not", "xor", "and", "or", "maj"])
    if op == "not":
        return Not(random_expr(rng, depth - 1, n_vars, const_p))
    if op == "maj":
        return Maj(*(random_expr(rng, depth - 1, n_vars, const_p) for _ in range(3)))
    cls = {"xor": Xor, "and": And, "or": Or}[op]
    return cls(
        random_expr(rng, depth - 1, n_vars, const_p),
        random_expr(rng, depth - 1, n_vars, const_p),
    )


def random_circuit(rng: random.Random, max_nodes: int = 12, n_vars: int = 4):
    while True:
        c = from_boolean(random_expr(rng, rng.randint(1, 3), n_vars))
        if len(c.nodes) <= max_nodes:
            return c


def random_constructor_circuit(rng: random.Random):
    """Random constructor compositions, including parallel and substitution."""
    c = from_boolean(random_expr(rng, rng.randint(1, 3)))
    roll = rng.random()
    if roll < 0.15:
        c = compose_parallel(c, from_boolean(random_expr(rng, rng.randint(0, 2))))
    elif roll < 0.3:
        c = compose_series(
            from_boolean(random_expr(rng, rng.randint(0, 2), const_p=0.5)), c
        ) if len(c.outputs) == 1 else c
    names = variables(c)
    if names and rng.random() < 0.3:
        c = substitute(c, rng.choice(names), rng.randint(0, 1))
    return c
