"""Expression grammar shared by the CLI and the fixture files.

::

    relation := expr ('=' expr)?
    expr     := '-'? term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := atom ('^' uint)?
    atom     := uint | 'q' | 'u' | 's' | generator | '(' expr ')'

A leading ``-`` is sugar for ``0 - ...``.  The right operand of ``/`` must be
free of generators.  Generators are ``x1``, ``xi2``, ``d3``, ``t12`` (also
``t[1,2]``), ``Dinv``, ``t33inv`` or whatever names the alphabet declares.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .freealg import Alphabet, NCPoly
from .scalar import VARS, Scalar

__all__ = ["ParseError", "parse", "parse_expr", "parse_scalar", "parse_relation", "load_relations"]


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Gen:
    name: str
    column: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    column: int = 0


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Param, Gen, BinOp, Pow]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<tij>t\[\s*([123])\s*,\s*([123])\s*\])|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()=]))"
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        col = m.start(m.lastgroup) + 1 if m.lastgroup else pos + 1
        if m.group("num"):
            toks.append(("num", m.group("num"), col))
        elif m.group("tij"):
            toks.append(("name", f"t{m.group(3)}{m.group(4)}", col))
        elif m.group("name"):
            toks.append(("name", m.group("name"), col))
        else:
            toks.append(("op", m.group("op"), col))
        pos = m.end()
    toks.append(("end", "", n + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.open_parens: List[int] = []

    def peek(self) -> Tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> Tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, what: str):
        kind, val, col = self.peek()
        if kind == "end" and self.open_parens:
            raise ParseError(f"unclosed '(' ({what})", self.open_parens[-1])
        got = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"expected {what}, got {got}", col)

    def expr(self) -> Expr:
        kind, val, col = self.peek()
        if kind == "op" and val == "-":
            self.take()
            node: Expr = BinOp("-", Num(0), self.term(), col)
        else:
            node = self.term()
        while True:
            kind, val, col = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = BinOp(val, node, self.term(), col)
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, val, col = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = BinOp(val, node, self.factor(), col)
            else:
                return node

    def factor(self) -> Expr:
        node = self.atom()
        kind, val, col = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, col = self.peek()
            if kind != "num":
                self.fail("a non-negative integer exponent")
            self.take()
            node = Pow(node, int(val))
        return node

    def atom(self) -> Expr:
        kind, val, col = self.peek()
        if kind == "num":
            self.take()
            return Num(int(val))
        if kind == "name":
            self.take()
            if val in VARS:
                return Param(val)
            return Gen(val, col)
        if kind == "op" and val == "(":
            self.take()
            self.open_parens.append(col)
            node = self.expr()
            kind2, val2, _ = self.peek()
            if kind2 != "op" or val2 != ")":
                self.fail("')'")
            self.take()
            self.open_parens.pop()
            return node
        self.fail("a number, parameter, generator or '('")

    def finish(self, allow_eq: bool = False):
        kind, val, col = self.peek()
        if kind == "end":
            return None
        if allow_eq and kind == "op" and val == "=":
            self.take()
            rhs = self.expr()
            if self.peek()[0] != "end":
                self.fail("end of input")
            return rhs
        self.fail("an operator or end of input")


def parse_expr(text: str) -> Expr:
    """Parse to an AST without resolving generator names."""
    p = _Parser(text)
    node = p.expr()
    p.finish()
    return node


def _has_gen(node: Expr) -> Optional[Gen]:
    if isinstance(node, Gen):
        return node
    if isinstance(node, BinOp):
        return _has_gen(node.left) or _has_gen(node.right)
    if isinstance(node, Pow):
        return _has_gen(node.base)
    return None


def _scalar(node: Expr) -> Scalar:
    if isinstance(node, Num):
        return Scalar.coerce(node.value)
    if isinstance(node, Param):
        return Scalar.var(node.name)
    if isinstance(node, Pow):
        return _scalar(node.base) ** node.exponent
    if isinstance(node, BinOp):
        a, b = _scalar(node.left), _scalar(node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b.is_zero():
            raise ParseError("division by zero", node.column)
        return a / b
    raise ParseError(f"generator {node.name!r} in a scalar expression", node.column)


def _poly(node: Expr, alphabet: Alphabet) -> NCPoly:
    if _has_gen(node) is None:
        return NCPoly._raw({}, alphabet) + _scalar(node)
    if isinstance(node, Gen):
        if node.name not in alphabet:
            raise ParseError(f"unknown generator {node.name!r}", node.column)
        return alphabet.gen(node.name)
    if isinstance(node, Pow):
        return _poly(node.base, alphabet) ** node.exponent
    assert isinstance(node, BinOp)
    if node.op == "/":
        g = _has_gen(node.right)
        if g is not None:
            raise ParseError("division by an expression containing generators", g.column)
        d = _scalar(node.right)
        if d.is_zero():
            raise ParseError("division by zero", node.column)
        return _poly(node.left, alphabet).scale(d.inverse())
    a, b = _poly(node.left, alphabet), _poly(node.right, alphabet)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    return a * b


def parse_scalar(text: str) -> Scalar:
    return _scalar(parse_expr(text))


def parse(text: str, alphabet: Alphabet) -> NCPoly:
    """Parse an expression over ``alphabet`` into a polynomial."""
    return _poly(parse_expr(text), alphabet)


def parse_relation(text: str, alphabet: Alphabet) -> Tuple[NCPoly, Optional[NCPoly]]:
    """Parse ``lhs = rhs`` (or a bare expression, meaning ``= 0``).

    Returns ``(lhs, rhs)``; ``rhs`` is None for the bare form.
    """
    p = _Parser(text)
    lhs = p.expr()
    rhs = p.finish(allow_eq=True)
    return _poly(lhs, alphabet), None if rhs is None else _poly(rhs, alphabet)


def load_relations(lines: Sequence[str] | str, alphabet: Alphabet) -> List[Tuple[NCPoly, Optional[NCPoly], int]]:
    """Parse a fixture: one relation per line, ``#`` starts a comment.

    Returns ``(lhs, rhs, line number)`` triples.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    out = []
    for no, line in enumerate(lines, 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            lhs, rhs = parse_relation(body, alphabet)
        except ParseError as e:
            raise ParseError(f"line {no}: {e.args[0].rsplit(' at column', 1)[0]}", e.column) from None
        out.append((lhs, rhs, no))
    return out
