"""Algebra <-> circuit bridge: translation, readback, synthesis, adders."""

import random

import pytest

from wavelogic import (
    And,
    CircuitError,
    Const,
    Maj,
    Not,
    Or,
    Var,
    Xor,
    equivalent,
    eval_bool,
    expr_vars,
    from_boolean,
    from_truth_table,
    full_adder,
    half_adder,
    is_isomorphic,
    mk_and,
    mk_const,
    mk_maj,
    mk_nand,
    mk_or,
    mk_var,
    mk_xor,
    to_boolean,
    truth_table,
    variables,
    wire,
)
from conftest import random_expr


def test_from_boolean_nested_and_or_matches_canonical_diagram():
    expr = Or(And(Var("a"), Var("b")), Var("c"))
    direct = mk_maj(mk_maj(mk_var("a"), mk_var("b"), mk_const(0)), mk_var("c"), mk_const(1))
    assert is_isomorphic(from_boolean(expr), direct)


def test_from_boolean_xor_and_const():
    assert truth_table(from_boolean(Xor(Var("a"), Var("b")))).column() == (0, 1, 1, 0)
    assert equivalent(from_boolean(Const(1)), mk_const(1))


def test_translation_matches_boolean_evaluator():
    rng = random.Random(5150)
    for _ in range(150):
        e = random_expr(rng, rng.randint(1, 3), n_vars=6)
        c = from_boolean(e)
        table = truth_table(c, vars=sorted(set(expr_vars(e)) | set(variables(c))))
        for i, row in enumerate(table.rows):
            assert row[0] == eval_bool(e, table.assignment_for_row(i))


def test_to_boolean_reads_back_gates():
    a, b = mk_var("a"), mk_var("b")
    assert to_boolean(mk_and(a, b)) == And(Var("a"), Var("b"))
    assert to_boolean(mk_or(a, b)) == Or(Var("a"), Var("b"))
    xnor = mk_xor(a, b)
    from wavelogic import compose_series

    assert to_boolean(compose_series(xnor, mk_const(1))) == Not(Xor(Var("a"), Var("b")))
    assert to_boolean(mk_maj(a, b, mk_var("c"))) == Maj(Var("a"), Var("b"), Var("c"))
    assert to_boolean(wire()) == Const(0)
    assert to_boolean(mk_const(1)) == Const(1)


def test_to_boolean_requires_single_output():
    from wavelogic import compose_parallel

    with pytest.raises(CircuitError):
        to_boolean(compose_parallel(mk_var("a"), mk_var("b")))


def test_round_trip_preserves_semantics():
    rng = random.Random(616)
    for _ in range(100):
        e = random_expr(rng, rng.randint(1, 3), n_vars=4)
        c = from_boolean(e)
        back = from_boolean(to_boolean(c))
        assert equivalent(back, c)


def test_from_truth_table_majority():
    maj = mk_maj(mk_var("a"), mk_var("b"), mk_var("c"))
    expr = from_truth_table(truth_table(maj))
    assert equivalent(from_boolean(expr), maj)


def test_from_truth_table_constants():
    zero = truth_table(mk_and(mk_var("a"), mk_const(0)))
    assert from_truth_table(zero) == Const(0)
    one = truth_table(mk_const(1))
    assert from_truth_table(one) == Const(1)


def test_from_truth_table_right_inverse():
    rng = random.Random(27)
    for _ in range(60):
        e = random_expr(rng, 2, n_vars=3)
        c = from_boolean(e)
        tt = truth_table(c)
        resynth = from_boolean(from_truth_table(tt))
        assert truth_table(resynth, vars=list(tt.vars)) == tt


def test_half_adder_table():
    tt = truth_table(half_adder())
    assert tt.vars == ("a", "b")
    assert tt.rows == ((0, 0), (0, 1), (0, 1), (1, 0))


def test_full_adder_table():
    tt = truth_table(full_adder())
    assert tt.vars == ("c_in", "a", "b")
    assert tt.rows == (
        (0, 0),
        (0, 1),
        (0, 1),
        (1, 0),
        (0, 1),
        (1, 0),
        (1, 0),
        (1, 1),
    )


def test_full_adder_arithmetic_identity():
    tt = truth_table(full_adder())
    for i, (c_out, total) in enumerate(tt.rows):
        sigma = tt.assignment_for_row(i)
        assert 2 * c_out + total == sigma["a"] + sigma["b"] + sigma["c_in"]


def test_de_morgan_on_translated_circuits():
    expr = Not(And(Var("x"), Var("y")))
    assert equivalent(from_boolean(expr), mk_nand(mk_var("x"), mk_var("y")))
