"""Expression parsing for rational functions.

Grammar: integers, i, z, + - * / ^ with ^ right-associative over integer
exponents (negative allowed), parentheses, the family constructors T(n),
D(s), pow(n), and named corpus references.  Parse errors carry the byte
offset of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .field import GaussianRational, I, gq
from .funcalg import RatFunc, render_ratfunc
from .dynamics import chebyshev, d_family
from .funcalg import power_map


class ParseError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    offset: int


def tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", pos + (len(text[pos:]) - len(stripped)))
        if m.group("int") is not None:
            out.append(Token("int", m.group("int"), m.start("int")))
        elif m.group("name") is not None:
            out.append(Token("name", m.group("name"), m.start("name")))
        else:
            out.append(Token("op", m.group("op"), m.start("op")))
        pos = m.end()
    return out


# FuncExpr nodes: ("int", n) ("i",) ("z",) ("neg", x) ("add"|"sub"|"mul"|"div", a, b)
# ("pow", base, exponent:int) ("family", kind, n) ("ref", name)


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.pos = 0
        self.text = text

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def expect_op(self, op):
        tok = self.take()
        if tok.kind != "op" or tok.value != op:
            raise ParseError(f"expected {op!r}", tok.offset)
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok.value!r}", tok.offset)
        return node

    def expr(self):
        node = self.term()
        while True:
            tok = self.peek()
            if tok and tok.kind == "op" and tok.value in "+-":
                self.take()
                rhs = self.term()
                node = ("add" if tok.value == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            tok = self.peek()
            if tok and tok.kind == "op" and tok.value in "*/":
                self.take()
                rhs = self.unary()
                node = ("mul" if tok.value == "*" else "div", node, rhs)
            else:
                return node

    def unary(self):
        tok = self.peek()
        if tok and tok.kind == "op" and tok.value == "-":
            self.take()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok and tok.kind == "op" and tok.value == "^":
            self.take()
            return ("pow", base, self.exponent())
        return base

    def exponent(self):
        """Integer exponent chain, right associative; negatives allowed."""
        sign = 1
        tok = self.peek()
        if tok and tok.kind == "op" and tok.value == "-":
            self.take()
            sign = -1
        tok = self.take()
        if tok.kind == "op" and tok.value == "(":
            inner = self.exponent()
            self.expect_op(")")
            val = inner
        elif tok.kind == "int":
            val = int(tok.value)
        else:
            raise ParseError("integer exponent required", tok.offset)
        nxt = self.peek()
        if nxt and nxt.kind == "op" and nxt.value == "^":
            self.take()
            val = val ** self.exponent()
        return sign * val

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return ("int", int(tok.value))
        if tok.kind == "op" and tok.value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if tok.kind == "name":
            name = tok.value
            nxt = self.peek()
            if nxt and nxt.kind == "op" and nxt.value == "(":
                if name not in ("T", "D", "pow"):
                    raise ParseError(f"unknown constructor {name!r}", tok.offset)
                self.take()
                arg = self.exponent()
                self.expect_op(")")
                return ("family", name, arg)
            if name == "i":
                return ("i",)
            if name == "z":
                return ("z",)
            return ("ref", name)
        raise ParseError(f"unexpected token {tok.value!r}", tok.offset)


def parse_expr(text: str):
    """Text to FuncExpr tree."""
    return _Parser(tokenize(text), text).parse()


def eval_expr(node, corpus=None, guard=None) -> RatFunc:
    """FuncExpr tree to an exact rational function."""
    kind = node[0]
    if kind == "int":
        return RatFunc.const(gq(node[1]))
    if kind == "i":
        return RatFunc.const(I)
    if kind == "z":
        return RatFunc.x()
    if kind == "neg":
        return -eval_expr(node[1], corpus, guard)
    if kind in ("add", "sub", "mul", "div"):
        a = eval_expr(node[1], corpus, guard)
        b = eval_expr(node[2], corpus, guard)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if b.num.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return a / b
    if kind == "pow":
        base = eval_expr(node[1], corpus, guard)
        return base ** node[2]
    if kind == "family":
        name, n = node[1], node[2]
        if name == "T":
            return chebyshev(n)
        if name == "D":
            return d_family(n)
        return power_map(n)
    if kind == "ref":
        if corpus is None or node[1] not in corpus:
            raise ParseError(f"unknown name {node[1]!r}", 0)
        return corpus[node[1]]
    raise AssertionError(f"bad node {node!r}")


def parse(text: str, corpus=None, guard=None) -> RatFunc:
    """Parse text all the way to a canonical rational function."""
    return eval_expr(parse_expr(text), corpus, guard)


def render(f: RatFunc) -> str:
    """Canonical textual form; reparses to an equal-exact function."""
    return render_ratfunc(f)
