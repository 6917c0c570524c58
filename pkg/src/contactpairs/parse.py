"""Expression grammar and raw expression trees.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' nat)*
    atom   := rational | 'pi' | ident | ('sin' | 'cos') '(' expr ')' | '(' expr ')'

Rationals are integers, ``a/b`` or exact decimals.  Division is only
allowed by rational constants; ``**`` is accepted as a synonym of ``^``.
Trees evaluate numerically on their own, independently of the canonical
form produced by :meth:`Node.normalize`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scalar import ExpressionClassError, ScalarExpr


class ParseError(ValueError):
    pass


class Node:
    def normalize(self) -> ScalarExpr:
        raise NotImplementedError

    def evaluate(self, env):
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Node):
    value: Fraction

    def normalize(self):
        return ScalarExpr.const(self.value)

    def evaluate(self, env):
        return float(self.value)


@dataclass(frozen=True)
class Pi(Node):
    def normalize(self):
        return ScalarExpr.pi()

    def evaluate(self, env):
        return math.pi


@dataclass(frozen=True)
class Sym(Node):
    name: str

    def normalize(self):
        return ScalarExpr.symbol(self.name)

    def evaluate(self, env):
        return np.asarray(env[self.name], dtype=float)


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    def normalize(self):
        return -self.arg.normalize()

    def evaluate(self, env):
        return -self.arg.evaluate(env)


@dataclass(frozen=True)
class Add(Node):
    args: tuple

    def normalize(self):
        out = ScalarExpr()
        for a in self.args:
            out = out + a.normalize()
        return out

    def evaluate(self, env):
        return sum(a.evaluate(env) for a in self.args)


@dataclass(frozen=True)
class Mul(Node):
    args: tuple

    def normalize(self):
        out = ScalarExpr.const(1)
        for a in self.args:
            out = out * a.normalize()
        return out

    def evaluate(self, env):
        out = 1.0
        for a in self.args:
            out = out * a.evaluate(env)
        return out


@dataclass(frozen=True)
class Div(Node):
    num: Node
    den: Node

    def normalize(self):
        den = self.den.normalize()
        q = den.rational_value()
        if q is None:
            raise ExpressionClassError(f"division by non-rational {den}")
        return self.num.normalize() / q

    def evaluate(self, env):
        return self.num.evaluate(env) / self.den.evaluate(env)


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int

    def normalize(self):
        return self.base.normalize() ** self.exponent

    def evaluate(self, env):
        return self.base.evaluate(env) ** self.exponent


@dataclass(frozen=True)
class Sin(Node):
    arg: Node

    def normalize(self):
        return ScalarExpr.sin(self.arg.normalize())

    def evaluate(self, env):
        return np.sin(self.arg.evaluate(env))


@dataclass(frozen=True)
class Cos(Node):
    arg: Node

    def normalize(self):
        return ScalarExpr.cos(self.arg.normalize())

    def evaluate(self, env):
        return np.cos(self.arg.evaluate(env))


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^(),]))"
)


def _tokenize(text: str) -> list:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r} at {pos} in {text!r}")
        pos = m.end()
        if m.group("num"):
            out.append(("num", m.group("num")))
        elif m.group("ident"):
            out.append(("ident", m.group("ident")))
        else:
            op = m.group("op")
            out.append(("op", "^" if op == "**" else op))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise ParseError(f"expected {want} in {self.text!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self) -> Node:
        if not self.toks:
            raise ParseError("empty expression")
        node = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return node

    def expr(self) -> Node:
        args = [self.term()]
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            t = self.term()
            args.append(t if op == "+" else Neg(t))
        return args[0] if len(args) == 1 else Add(tuple(args))

    def term(self) -> Node:
        node = self.factor()
        factors = [node]
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.factor()
            if op == "*":
                factors.append(rhs)
            else:
                lhs = factors[0] if len(factors) == 1 else Mul(tuple(factors))
                factors = [Div(lhs, rhs)]
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self) -> Node:
        if self.peek() == ("op", "-"):
            self.take()
            return Neg(self.factor())
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        node = self.atom()
        while self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take("num")
            if not val.isdigit():
                raise ParseError(f"exponent must be a natural number, got {val!r}")
            node = Pow(node, int(val))
        return node

    def atom(self) -> Node:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Num(Fraction(val))
        if kind == "ident":
            self.take()
            if val == "pi":
                return Pi()
            if val in ("sin", "cos"):
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                return Sin(arg) if val == "sin" else Cos(arg)
            if self.peek() == ("op", "("):
                raise ParseError(f"unsupported function {val!r}")
            return Sym(val)
        if (kind, val) == ("op", "("):
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        raise ParseError(f"unexpected {val!r} in {self.text!r}")


def parse_expr(text: str) -> Node:
    """Parse a string into a raw expression tree."""
    return _Parser(text).parse()


def parse(text: str) -> ScalarExpr:
    """Parse and normalize."""
    return parse_expr(text).normalize()
