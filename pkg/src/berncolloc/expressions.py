"""Minimal arithmetic expression parser for problem files.

Grammar: + - * / ^ with the usual precedence, ^ binding tightest and
right-associative, unary minus, parentheses, the functions sin, cos, exp,
the constant pi, and the variables x and y. Parsing produces a plain
Python callable of (x, y).
"""

from __future__ import annotations

import math
import re
from typing import Callable

__all__ = ["Expression", "ExpressionError", "parse_expression"]

_FUNCTIONS = {"sin": math.sin, "cos": math.cos, "exp": math.exp}
_CONSTANTS = {"pi": math.pi}

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


class ExpressionError(ValueError):
    """Parse failure; ``position`` is the 0-based offset into the source text."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class Expression:
    """Compiled expression; callable with (x, y)."""

    def __init__(self, fn: Callable[[float, float], float], text: str, variables: frozenset[str]):
        self._fn = fn
        self.text = text
        self.variables = variables

    def __call__(self, x: float, y: float) -> float:
        return self._fn(x, y)

    def __repr__(self):
        return f"Expression({self.text!r})"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.variables: set[str] = set()

    def _match(self):
        if self.pos >= len(self.text):
            return None
        match = _TOKEN.match(self.text, self.pos)
        if match is None:
            rest = self.text[self.pos :]
            if rest.strip() == "":
                self.pos = len(self.text)
                return None
            bad = self.pos + len(rest) - len(rest.lstrip())
            raise ExpressionError(f"unexpected character {self.text[bad]!r}", bad)
        return match

    def peek(self):
        saved = self.pos
        match = self._match()
        self.pos = saved
        return match

    def advance(self):
        match = self._match()
        if match is not None:
            self.pos = match.end()
        return match

    def expect_op(self, op: str):
        match = self.advance()
        if match is None or match.lastgroup != "op" or match.group("op") != op:
            where = match.start() if match else self.pos
            raise ExpressionError(f"expected {op!r}", where)

    def parse(self) -> Callable[[float, float], float]:
        fn = self.parse_expr()
        trailing = self.advance()
        if trailing is not None:
            raise ExpressionError(
                f"unexpected trailing input {trailing.group().strip()!r}", trailing.start()
            )
        return fn

    def parse_expr(self):
        fn = self.parse_term()
        while True:
            match = self.peek()
            if match is None or match.lastgroup != "op" or match.group("op") not in "+-":
                return fn
            self.advance()
            rhs = self.parse_term()
            if match.group("op") == "+":
                fn = (lambda a, b: lambda x, y: a(x, y) + b(x, y))(fn, rhs)
            else:
                fn = (lambda a, b: lambda x, y: a(x, y) - b(x, y))(fn, rhs)

    def parse_term(self):
        fn = self.parse_unary()
        while True:
            match = self.peek()
            if match is None or match.lastgroup != "op" or match.group("op") not in "*/":
                return fn
            self.advance()
            rhs = self.parse_unary()
            if match.group("op") == "*":
                fn = (lambda a, b: lambda x, y: a(x, y) * b(x, y))(fn, rhs)
            else:
                fn = (lambda a, b: lambda x, y: a(x, y) / b(x, y))(fn, rhs)

    def parse_unary(self):
        match = self.peek()
        if match is not None and match.lastgroup == "op" and match.group("op") in "+-":
            self.advance()
            inner = self.parse_unary()
            if match.group("op") == "-":
                return lambda x, y: -inner(x, y)
            return inner
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        match = self.peek()
        if match is not None and match.lastgroup == "op" and match.group("op") == "^":
            self.advance()
            exponent = self.parse_unary()  # right-associative, signed exponents allowed
            return lambda x, y: base(x, y) ** exponent(x, y)
        return base

    def parse_atom(self):
        match = self.advance()
        if match is None:
            raise ExpressionError("unexpected end of expression", self.pos)
        kind = match.lastgroup
        if kind == "number":
            value = float(match.group("number"))
            return lambda x, y: value
        if kind == "name":
            name = match.group("name")
            if name in _FUNCTIONS:
                fn = _FUNCTIONS[name]
                self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")")
                return (lambda f, a: lambda x, y: f(a(x, y)))(fn, arg)
            if name in _CONSTANTS:
                value = _CONSTANTS[name]
                return lambda x, y: value
            if name == "x":
                self.variables.add("x")
                return lambda x, y: x
            if name == "y":
                self.variables.add("y")
                return lambda x, y: y
            raise ExpressionError(f"unknown name {name!r}", match.start("name"))
        if match.group("op") == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        raise ExpressionError(f"unexpected token {match.group().strip()!r}", match.start())


def parse_expression(text: str) -> Expression:
    """Parse an expression in x and y into a callable."""
    if not text.strip():
        raise ExpressionError("empty expression", 0)
    parser = _Parser(text)
    fn = parser.parse()
    return Expression(fn, text.strip(), frozenset(parser.variables))
