"""Expression grammar: parsing, errors with positions, print round-trip."""

import random

import pytest

from wavelogic import (
    And,
    Const,
    ExprParseError,
    Maj,
    Not,
    Or,
    Var,
    Xor,
    format_expr,
    parse_expr,
)
from conftest import random_expr


def test_parse_majority():
    assert parse_expr("maj(a,b,0)") == Maj(Var("a"), Var("b"), Const(0))


def test_parse_nested_not():
    assert parse_expr("not(not(a))") == Not(Not(Var("a")))


def test_parse_sugar():
    assert parse_expr("xnor(a,b)") == Not(Xor(Var("a"), Var("b")))
    assert parse_expr("nand(a,b)") == Not(And(Var("a"), Var("b")))


def test_whitespace_insignificant():
    assert parse_expr(" maj( a ,\n b , 0 ) ") == Maj(Var("a"), Var("b"), Const(0))


def test_arity_error_position():
    with pytest.raises(ExprParseError) as err:
        parse_expr("maj(a,b)")
    assert err.value.column == 8  # at the ')'
    assert "','" in str(err.value)


def test_unknown_function_lists_expected():
    with pytest.raises(ExprParseError) as err:
        parse_expr("nor(a,b)")
    message = str(err.value)
    for name in ("and", "maj", "nand", "not", "or", "xnor", "xor"):
        assert name in message


def test_unexpected_character_position():
    with pytest.raises(ExprParseError) as err:
        parse_expr("and(a,\nB)")
    assert err.value.line == 2
    assert err.value.column == 1


def test_trailing_garbage_rejected():
    with pytest.raises(ExprParseError):
        parse_expr("a b")
    with pytest.raises(ExprParseError):
        parse_expr("xor(a,b))")


def test_bits_and_identifiers():
    assert parse_expr("0") == Const(0)
    assert parse_expr("1") == Const(1)
    assert parse_expr("x_1") == Var("x_1")


def test_print_parse_round_trip_random():
    rng = random.Random(31337)
    for _ in range(1000):
        e = random_expr(rng, rng.randint(0, 4), n_vars=5)
        assert parse_expr(format_expr(e)) == e


def test_format_examples():
    assert format_expr(Maj(Var("a"), Var("b"), Const(0))) == "maj(a,b,0)"
    assert format_expr(Not(Xor(Var("a"), Var("b")))) == "not(xor(a,b))"
    assert format_expr(Or(And(Var("a"), Var("b")), Var("c"))) == "or(and(a,b),c)"
