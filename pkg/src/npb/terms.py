"""
Terms in two binary operations and a small parser for them.

A term is a generator name (``str``), ``("*", l, r)`` for the dot or
``("[", l, r)`` for the bracket. The surface syntax is ``a*b`` for dot,
``[a,b]`` for bracket and parentheses for grouping; ``*`` associates to
the left. Polynomials are signed sums ``2 [a,b]*c - c*[a,b]``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

DOT = "*"
BR = "["

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokens(s: str):
    out = []
    for num, name, ch in _TOKEN.findall(s):
        if num:
            out.append(("num", num))
        elif name:
            out.append(("id", name))
        elif ch.strip():
            out.append(("op", ch))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'} at position {self.i} in {self.text!r}")
        self.i += 1
        return tok

    def term(self):
        t = self.factor()
        while self.peek() == ("op", "*"):
            self.take("*")
            t = (DOT, t, self.factor())
        return t

    def factor(self):
        kind, val = self.peek()
        if kind == "id":
            self.take()
            return val
        if val == "[":
            self.take("[")
            left = self.term()
            self.take(",")
            right = self.term()
            self.take("]")
            return (BR, left, right)
        if val == "(":
            self.take("(")
            t = self.term()
            self.take(")")
            return t
        raise ParseError(f"unexpected {val!r} in {self.text!r}")

    def poly(self):
        out = []
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        while True:
            coef = Fraction(1)
            if self.peek()[0] == "num":
                coef = Fraction(self.take()[1])
            out.append((sign * coef, self.term()))
            tok = self.peek()
            if tok == ("op", "+"):
                sign = 1
            elif tok == ("op", "-"):
                sign = -1
            else:
                break
            self.take()
        return out

    def done(self):
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.i} in {self.text!r}")


def parse_term(text: str):
    p = _Parser(text)
    t = p.term()
    p.done()
    return t


def parse_poly(text: str):
    p = _Parser(text)
    out = p.poly()
    p.done()
    return out


def term_str(t) -> str:
    if isinstance(t, str):
        return t
    op, l, r = t
    if op == BR:
        return f"[{term_str(l)},{term_str(r)}]"
    # dot is associative in every variety handled here, so chains print flat
    return "*".join(term_str(f) for f in _dot_chain(t))


def _dot_chain(t):
    if isinstance(t, str) or t[0] != DOT:
        return [t]
    return _dot_chain(t[1]) + _dot_chain(t[2])


def degree(t) -> int:
    if isinstance(t, str):
        return 1
    return degree(t[1]) + degree(t[2])


def variables(t) -> list:
    """Generator names in order of first appearance."""
    seen = []

    def walk(u):
        if isinstance(u, str):
            if u not in seen:
                seen.append(u)
        else:
            walk(u[1])
            walk(u[2])

    walk(t)
    return seen


def interpret(t, env: dict, dot, bracket):
    """Evaluate a term given values for generators and the two operations."""
    if isinstance(t, str):
        return env[t]
    a = interpret(t[1], env, dot, bracket)
    b = interpret(t[2], env, dot, bracket)
    return dot(a, b) if t[0] == DOT else bracket(a, b)
