"""Parser for the expression language accepted by ``qcfs quotient --expr``.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ['-'] atom ('^' signed-int)?
    atom   := rational | ident | '(' expr ')'

Identifiers are ``t1..tn, x1..xn, y1..yn, z1..zn, x, y, z`` and ``P``.
Rationals are integers, decimals (``1.5``) or ``p/q`` written without spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .powersum import PowerSum
from .space import base_P, ps_coord, ps_const, var_index


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str
    index: int


@dataclass(frozen=True)
class PSym:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


Expr = Num | Var | PSym | BinOp | Neg | Pow

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


def _tokenize(src: str):
    data = src.encode("utf-8")
    pos = 0
    out = []
    text = src
    # offsets are reported in bytes; the grammar is pure ASCII so characters
    # beyond it are rejected at their byte position.
    char_to_byte = []
    b = 0
    for ch in text:
        char_to_byte.append(b)
        b += len(ch.encode("utf-8"))
    char_to_byte.append(len(data))
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            skip = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + skip]!r}", char_to_byte[pos + skip])
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), char_to_byte[start]))
        pos = m.end()
    out.append(("end", "", char_to_byte[len(text)]))
    return out


class _Parser:
    def __init__(self, src: str, n: int):
        self.toks = _tokenize(src)
        self.i = 0
        self.n = n

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, off = self.take()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", off)

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in "+-":
                sign = -1 if self.take()[1] == "-" else 1
            kind, text, off = self.take()
            if kind != "num" or not text.isdigit():
                raise ParseError("exponent must be an integer", off)
            node = Pow(node, sign * int(text))
        return node

    def atom(self):
        kind, text, off = self.take()
        if kind == "num":
            return Num(Fraction(text) if "/" in text else Fraction(text))
        if kind == "ident":
            if text == "P":
                return PSym()
            try:
                return Var(text, var_index(text, self.n))
            except KeyError:
                raise ParseError(f"unknown identifier {text!r}", off) from None
            except IndexError:
                raise ParseError(f"variable {text!r} out of range for n={self.n}", off) from None
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {text or 'end of input'!r}", off)


def parse(src: str, n: int) -> Expr:
    if not src or not src.strip():
        raise ParseError("empty expression", 0)
    p = _Parser(src, n)
    node = p.expr()
    kind, text, off = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {text!r}", off)
    return node


def eval_expr(e: Expr, n: int) -> PowerSum:
    if isinstance(e, Num):
        return ps_const(e.value, n)
    if isinstance(e, Var):
        return ps_coord(n, e.index)
    if isinstance(e, PSym):
        return PowerSum.poly(base_P(n), base_P(n))
    if isinstance(e, Neg):
        return -eval_expr(e.operand, n)
    if isinstance(e, Pow):
        return eval_expr(e.base, n) ** e.exp
    if isinstance(e, BinOp):
        a, b = eval_expr(e.left, n), eval_expr(e.right, n)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        return a * b
    raise TypeError(f"not an expression node: {e!r}")
