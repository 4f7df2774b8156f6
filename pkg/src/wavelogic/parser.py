"""Concrete syntax for Boolean expressions.

Grammar (whitespace insignificant)::

    expr  := ident | "0" | "1"
           | "not(" expr ")"
           | "xor(" expr "," expr ")"   | "xnor(" expr "," expr ")"
           | "and(" expr "," expr ")"   | "or(" expr "," expr ")"
           | "nand(" expr "," expr ")"  | "maj(" expr "," expr "," expr ")"
    ident := [a-z][a-z0-9_]*

``xnor`` and ``nand`` are sugar: they parse to Not(Xor(...)) and Not(And(...)).
Printing emits only core constructs, so parse(print(e)) == e structurally.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boolexpr import And, BoolExpr, Const, Maj, Not, Or, Var, Xor
from .errors import ExprParseError

_FUNCTIONS = {
    "and": (2, And),
    "maj": (3, Maj),
    "nand": (2, lambda a, b: Not(And(a, b))),
    "not": (1, Not),
    "or": (2, Or),
    "xnor": (2, lambda a, b: Not(Xor(a, b))),
    "xor": (2, Xor),
}
_EXPECTED_FUNCTIONS = ", ".join(sorted(_FUNCTIONS))


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "bit" | "(" | ")" | "," | "end"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            col += 1
            i += 1
            continue
        if ch in "(),":
            tokens.append(_Token(ch, ch, line, col))
            col += 1
            i += 1
            continue
        if ch in "01":
            tokens.append(_Token("bit", ch, line, col))
            col += 1
            i += 1
            continue
        if "a" <= ch <= "z":
            start = i
            start_col = col
            while i < len(text) and (text[i].islower() or text[i].isdigit() or text[i] == "_"):
                i += 1
                col += 1
            tokens.append(_Token("ident", text[start:i], line, start_col))
            continue
        raise ExprParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str, what: str) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != kind:
            shown = tok.text if tok.kind != "end" else "end of input"
            raise ExprParseError(f"expected {what}, found {shown!r}", tok.line, tok.column)
        self.pos += 1
        return tok

    def expr(self) -> BoolExpr:
        tok = self.peek()
        if tok.kind == "bit":
            self.pos += 1
            return Const(int(tok.text))
        if tok.kind == "ident":
            self.pos += 1
            if self.peek().kind != "(":
                return Var(tok.text)
            if tok.text not in _FUNCTIONS:
                raise ExprParseError(
                    f"unknown function {tok.text!r}; expected one of: {_EXPECTED_FUNCTIONS}",
                    tok.line,
                    tok.column,
                )
            arity, build = _FUNCTIONS[tok.text]
            self.take("(", "'('")
            args = [self.expr()]
            while len(args) < arity:
                self.take(",", "','")
                args.append(self.expr())
            self.take(")", "')'")
            return build(*args)
        shown = tok.text if tok.kind != "end" else "end of input"
        raise ExprParseError(f"expected an expression, found {shown!r}", tok.line, tok.column)


def parse_expr(text: str) -> BoolExpr:
    parser = _Parser(_tokenize(text))
    result = parser.expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ExprParseError(f"expected end of input, found {tail.text!r}", tail.line, tail.column)
    return result


def format_expr(e: BoolExpr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return str(e.bit)
    if isinstance(e, Not):
        return f"not({format_expr(e.arg)})"
    if isinstance(e, And):
        return f"and({format_expr(e.left)},{format_expr(e.right)})"
    if isinstance(e, Or):
        return f"or({format_expr(e.left)},{format_expr(e.right)})"
    if isinstance(e, Xor):
        return f"xor({format_expr(e.left)},{format_expr(e.right)})"
    if isinstance(e, Maj):
        return f"maj({format_expr(e.a)},{format_expr(e.b)},{format_expr(e.c)})"
    raise TypeError(f"not a BoolExpr: {e!r}")
