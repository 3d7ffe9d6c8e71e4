"""Recursive-descent parser for the expression grammar.

    expr     := term (("+" | "-") term)*
    term     := unary ("*" unary)*
    unary    := "-" unary | factor
    factor   := atom ("^" exponent)?
    exponent := "-"? INTEGER | "(" "-"? INTEGER ")"
    atom     := NUMBER | "x" | "y" | FUNC "(" expr ")" | "(" expr ")"
    FUNC     := "sin" | "cos" | "exp" | "ln"
    NUMBER   := INTEGER ("/" INTEGER)? | DECIMAL

Unary minus binds looser than ``^`` so ``-x^2`` is ``-(x^2)``.  Implicit
multiplication is rejected.  Decimals become exact rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExprSyntaxError, UnsupportedConstruct
from .expr import FUNCTIONS, Constant, Expr, Neg, Power, Product, Sum, Variable

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+\.\d*|\.\d+|\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^()/])
    """,
    re.VERBOSE,
)

_ATOM_START = frozenset({"number", "x", "y", "(", *FUNCTIONS})
_AFTER_FACTOR = frozenset({"*", "+", "-", "^", ")", "end of input"})


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "name", an operator character, or "end"
    text: str
    offset: int  # byte offset into the UTF-8 encoded source


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        if m.lastgroup != "ws":
            kind = m.group() if m.lastgroup == "op" else m.lastgroup
            tokens.append(Token(kind, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, expected: frozenset[str] | None = None) -> Token:
        if self.tok.kind != kind:
            self.fail(expected or frozenset({kind}))
        return self.advance()

    def fail(self, expected: frozenset[str]):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"unexpected {found}", t.offset, expected)

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail(_AFTER_FACTOR)
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            t = self.term()
            terms.append(Neg(t) if op == "-" else t)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self) -> Expr:
        factors = [self.unary()]
        while self.tok.kind == "*":
            self.advance()
            factors.append(self.unary())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def unary(self) -> Expr:
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.factor()

    def factor(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "^":
            self.advance()
            return Power(base, self.exponent())
        return base

    def exponent(self) -> int:
        start = self.tok
        paren = start.kind == "("
        if paren:
            self.advance()
        sign = 1
        if self.tok.kind == "-":
            self.advance()
            sign = -1
        t = self.tok
        if t.kind != "number" or not t.text.isdigit():
            raise UnsupportedConstruct(
                "exponent must be an integer literal", start.offset, frozenset({"integer"})
            )
        self.advance()
        if paren:
            if self.tok.kind != ")":
                raise UnsupportedConstruct(
                    "exponent must be an integer literal", start.offset, frozenset({"integer"})
                )
            self.advance()
        return sign * int(t.text)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Constant(Fraction(t.text))
        if t.kind == "name":
            self.advance()
            if t.text in ("x", "y"):
                return Variable(t.text)
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")", frozenset({")", "+", "-", "*", "^"}))
                return FUNCTIONS[t.text](arg)
            what = "function" if self.tok.kind == "(" else "identifier"
            raise UnsupportedConstruct(f"unknown {what} {t.text!r}", t.offset)
        if t.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")", frozenset({")", "+", "-", "*", "^"}))
            return e
        self.fail(_ATOM_START | {"-"})


def parse(text: str) -> Expr:
    """Parse ``text`` into an unnormalized expression tree."""
    return _Parser(text).parse()
