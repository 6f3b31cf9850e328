"""Small arithmetic expression grammar shared by chart files and field angles.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?          # right associative, -u^2 == -(u^2)
    atom   := NUMBER | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'

Names are the coordinates ``u`` and ``v``, the constants ``pi`` and ``e``,
and any extra symbols the caller allows. Parsing yields a sympy expression so
that charts and fields can be differentiated exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import sympy as sp

U, V = sp.symbols("u v", real=True)

FUNCTIONS = {
    "sin": sp.sin,
    "cos": sp.cos,
    "tan": sp.tan,
    "sinh": sp.sinh,
    "cosh": sp.cosh,
    "tanh": sp.tanh,
    "coth": lambda x: sp.cosh(x) / sp.sinh(x),
    "exp": sp.exp,
    "log": sp.log,
    "sqrt": sp.sqrt,
    "atan": sp.atan,
    "atan2": sp.atan2,
}
ARITY = {"atan2": 2}
CONSTANTS = {"pi": sp.pi, "e": sp.E}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


class ExprSyntaxError(ValueError):
    """Parse failure with a 1-based line/column source span."""

    def __init__(self, message: str, text: str, pos: int, line: int = 1, col_offset: int = 0):
        self.message = message
        self.text = text
        self.pos = pos
        self.line = line
        self.column = col_offset + pos + 1
        super().__init__(f"line {self.line}, column {self.column}: {message}\n  {text}\n  {' ' * pos}^")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str, err) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise err(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, symbols: dict[str, sp.Symbol], line: int, col_offset: int):
        self.text = text
        self.symbols = symbols
        self.line = line
        self.col_offset = col_offset
        self.toks = _tokenize(text, self.error)
        self.i = 0

    def error(self, message: str, pos: int) -> ExprSyntaxError:
        return ExprSyntaxError(message, self.text, pos, self.line, self.col_offset)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, text: str | None = None) -> _Tok:
        tok = self.tok
        if text is not None and tok.text != text:
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise self.error(f"expected {text!r}, found {found}", tok.pos)
        self.i += 1
        return tok

    def parse(self) -> sp.Expr:
        if self.tok.kind == "end":
            raise self.error("empty expression", self.tok.pos)
        out = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}", self.tok.pos)
        return out

    def expr(self):
        out = self.term()
        while self.tok.text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.take().text
            rhs = self.unary()
            out = out * rhs if op == "*" else out / rhs
        return out

    def unary(self):
        if self.tok.text == "-":
            self.take()
            return -self.unary()
        if self.tok.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.text == "^":
            self.take()
            return base ** self.unary()
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.take()
            return sp.Float(tok.text) if any(ch in tok.text for ch in ".eE") else sp.Integer(tok.text)
        if tok.text == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        if tok.kind == "name":
            self.take()
            if self.tok.text == "(":
                if tok.text not in FUNCTIONS:
                    raise self.error(f"unknown function {tok.text!r}", tok.pos)
                self.take("(")
                args = [self.expr()]
                while self.tok.text == ",":
                    self.take()
                    args.append(self.expr())
                self.take(")")
                want = ARITY.get(tok.text, 1)
                if len(args) != want:
                    raise self.error(f"{tok.text} takes {want} argument(s), got {len(args)}", tok.pos)
                return FUNCTIONS[tok.text](*args)
            if tok.text in self.symbols:
                return self.symbols[tok.text]
            if tok.text in CONSTANTS:
                return CONSTANTS[tok.text]
            if tok.text in FUNCTIONS:
                raise self.error(f"function {tok.text!r} needs arguments", tok.pos)
            raise self.error(f"unknown name {tok.text!r}", tok.pos)
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise self.error(f"unexpected {found}", tok.pos)


def parse_expr(
    text: str,
    extra: dict[str, sp.Symbol] | None = None,
    *,
    line: int = 1,
    col_offset: int = 0,
) -> sp.Expr:
    """Parse ``text`` into a sympy expression in the symbols ``u`` and ``v``.

    ``line``/``col_offset`` shift the reported error position when the text is
    a slice of a larger file.
    """
    symbols = {"u": U, "v": V}
    if extra:
        symbols.update(extra)
    return _Parser(text, symbols, line, col_offset).parse()


def parse_constant(text: str, *, line: int = 1, col_offset: int = 0) -> float:
    """Parse a closed expression (no coordinates) and evaluate it."""
    out = _Parser(text, {}, line, col_offset).parse()
    return float(out)
