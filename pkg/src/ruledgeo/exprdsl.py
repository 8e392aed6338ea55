"""Small arithmetic expression language for curves and angles.

Grammar:
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := number | 't' | ident '(' expr ')' | '(' expr ')' | '-' factor

plus bare identifiers for the constants pi and e.  Vectors are three
comma-separated expressions.  Expressions evaluate on floats or on dual
numbers, so every parsed expression differentiates itself exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .dual import DualNumber, apply_analytic, _ANALYTIC
from .errors import ParseError

_CONSTANTS = {"pi": math.pi, "e": math.e}
_NUM_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")

Number = Union[float, DualNumber]


@dataclass(frozen=True)
class _Token:
    kind: str   # num | ident | op | lparen | rparen | comma | end
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _NUM_RE.match(text, i)
            lit = m.group(0)
            tokens.append(_Token("num", lit, line, start_col))
            col += len(lit)
            i = m.end()
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in "+-*/":
            tokens.append(_Token("op", ch, line, start_col))
        elif ch == "(":
            tokens.append(_Token("lparen", ch, line, start_col))
        elif ch == ")":
            tokens.append(_Token("rparen", ch, line, start_col))
        elif ch == ",":
            tokens.append(_Token("comma", ch, line, start_col))
        else:
            raise ParseError(f"unexpected character {ch!r}", line, start_col)
        i += 1
        col += 1
    tokens.append(_Token("end", "", line, col))
    return tokens


# AST nodes: ("num", v) | ("t",) | ("const", name) | ("call", name, node)
#            ("neg", node) | ("+"|"-"|"*"|"/", left, right)


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(
                f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}",
                tok.line,
                tok.column,
            )
        return tok

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            node = (op, node, self.factor())
        return node

    def factor(self):
        tok = self.next()
        if tok.kind == "num":
            return ("num", float(tok.text))
        if tok.kind == "op" and tok.text == "-":
            return ("neg", self.factor())
        if tok.kind == "lparen":
            node = self.expr()
            self.expect("rparen", "')'")
            return node
        if tok.kind == "ident":
            if tok.text == "t":
                return ("t",)
            if self.peek().kind == "lparen":
                if tok.text not in _ANALYTIC:
                    raise ParseError(f"unknown function {tok.text!r}", tok.line, tok.column)
                self.next()
                arg = self.expr()
                self.expect("rparen", "')'")
                return ("call", tok.text, arg)
            if tok.text in _CONSTANTS:
                return ("const", tok.text)
            raise ParseError(f"unknown identifier {tok.text!r}", tok.line, tok.column)
        raise ParseError(
            f"unexpected {tok.text!r}" if tok.text else "unexpected end of input",
            tok.line,
            tok.column,
        )


def _evaluate(node, t: Number) -> Number:
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "t":
        return t
    if kind == "const":
        return _CONSTANTS[node[1]]
    if kind == "call":
        arg = _evaluate(node[2], t)
        if isinstance(arg, DualNumber):
            return apply_analytic(node[1], arg)
        return _ANALYTIC[node[1]][0](arg)
    if kind == "neg":
        return -_evaluate(node[1], t)
    a = _evaluate(node[1], t)
    b = _evaluate(node[2], t)
    if kind == "+":
        return a + b
    if kind == "-":
        return a - b
    if kind == "*":
        return a * b
    return a / b


@dataclass(frozen=True)
class Expression:
    """A parsed expression in the variable t; calls evaluate, exactly
    differentiable through dual numbers."""

    source: str
    ast: tuple

    def __call__(self, t: float) -> float:
        v = _evaluate(self.ast, float(t))
        return float(v)

    def derivative(self, t: float) -> float:
        v = _evaluate(self.ast, DualNumber(float(t), 1.0))
        return v.dual if isinstance(v, DualNumber) else 0.0

    def is_constant(self) -> bool:
        return not _uses_t(self.ast)


def _uses_t(node) -> bool:
    if node[0] == "t":
        return True
    return any(_uses_t(child) for child in node[1:] if isinstance(child, tuple))


def parse_expression(text: str) -> Expression:
    tokens = _tokenize(text)
    parser = _Parser(tokens)
    ast = parser.expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"trailing input {tail.text!r}", tail.line, tail.column)
    return Expression(text.strip(), ast)


def parse_vector(text: str) -> tuple[Expression, Expression, Expression]:
    """Three comma-separated expressions, optionally wrapped in parentheses."""
    stripped = text.strip()
    if stripped.startswith("(") and stripped.endswith(")"):
        inner = stripped[1:-1]
    else:
        inner = stripped
    tokens = _tokenize(inner)
    parser = _Parser(tokens)
    parts = [parser.expr()]
    while parser.peek().kind == "comma":
        parser.next()
        parts.append(parser.expr())
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"trailing input {tail.text!r}", tail.line, tail.column)
    if len(parts) != 3:
        raise ParseError(f"vector needs 3 components, found {len(parts)}", 1, 1)
    return tuple(Expression(inner.strip(), ast) for ast in parts)  # type: ignore[return-value]
