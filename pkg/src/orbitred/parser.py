"""Expression and problem-file parsing.

Expression grammar (no implicit multiplication):

    expr    := ['-'] term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := primary ['^' integer]
    primary := integer ['/' integer] | name | '(' expr ')' | '-' primary

Numbers are arbitrary-precision integers or rational literals ``p/q``.
Diagnostics carry一 line and column (1-based).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .poly import Poly


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class _Token:
    kind: str  # INT, NAME, OP, END
    text: str
    line: int
    col: int


_INT_RE = re.compile(r"\d+")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_OPS = set("+-*^()/")


def _tokenize(text: str, line: int = 1) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    cur_line = line
    line_start = 0
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            cur_line += 1
            line_start = pos + 1
            pos += 1
            continue
        if ch.isspace():
            pos += 1
            continue
        col = pos - line_start + 1
        if ch.isdigit():
            m = _INT_RE.match(text, pos)
            tokens.append(_Token("INT", m.group(0), cur_line, col))
            pos = m.end()
        elif ch.isalpha() or ch == "_":
            m = _NAME_RE.match(text, pos)
            tokens.append(_Token("NAME", m.group(0), cur_line, col))
            pos = m.end()
        elif ch in _OPS:
            tokens.append(_Token("OP", ch, cur_line, col))
            pos += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", cur_line, col)
    tokens.append(_Token("END", "", cur_line, len(text) - line_start + 1))
    return tokens


class _Parser:
    """Recursive-descent parser building values in a caller-supplied ring."""

    def __init__(
        self,
        tokens: list[_Token],
        constant: Callable[[Fraction], object],
        variable: Callable[[str, int, int], object],
    ):
        self.tokens = tokens
        self.i = 0
        self.constant = constant
        self.variable = variable

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, text: str) -> _Token:
        tok = self.next()
        if tok.kind != "OP" or tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            raise ParseError(f"unexpected trailing {tok.text!r}", tok.line, tok.col)
        return value

    def expr(self):
        negate = False
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.next()
            negate = True
        value = self.term()
        if negate:
            value = self.constant(Fraction(-1)) * value
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.next().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek().kind == "OP" and self.peek().text == "*":
            self.next()
            value = value * self.factor()
        return value

    def factor(self):
        value = self.primary()
        if self.peek().kind == "OP" and self.peek().text == "^":
            self.next()
            tok = self.next()
            if tok.kind != "INT":
                raise ParseError("exponent must be a non-negative integer", tok.line, tok.col)
            value = value ** int(tok.text)
        return value

    def primary(self):
        tok = self.next()
        if tok.kind == "INT":
            num = int(tok.text)
            if self.peek().kind == "OP" and self.peek().text == "/":
                self.next()
                dtok = self.next()
                if dtok.kind != "INT":
                    raise ParseError("rational literal must be integer/integer", dtok.line, dtok.col)
                den = int(dtok.text)
                if den == 0:
                    raise ParseError("zero denominator in rational literal", dtok.line, dtok.col)
                return self.constant(Fraction(num, den))
            return self.constant(Fraction(num))
        if tok.kind == "NAME":
            return self.variable(tok.text, tok.line, tok.col)
        if tok.kind == "OP" and tok.text == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        if tok.kind == "OP" and tok.text == "-":
            return self.constant(Fraction(-1)) * self.primary()
        raise ParseError(
            f"expected a number, name or '(', found {tok.text or 'end of input'!r}",
            tok.line,
            tok.col,
        )


def parse_poly(text: str, variables: Sequence[str], line: int = 1) -> Poly:
    """Parse an expression into a Poly over the given variable set."""
    variables = tuple(variables)

    def constant(c: Fraction) -> Poly:
        return Poly.const(variables, c)

    def variable(name: str, ln: int, col: int) -> Poly:
        if name not in variables:
            raise ParseError(f"unknown name {name!r}", ln, col)
        return Poly.variable(variables, name)

    return _Parser(_tokenize(text, line=line), constant, variable).parse()


def parse_orbit(text: str, basis, params, line: int = 1):
    """Parse an expression into an OrbitPoly (names may be invariants or parameters)."""
    from .orbit import OrbitPoly
    from .ratfun import RatFun

    def constant(c: Fraction) -> "OrbitPoly":
        return OrbitPoly(basis, params, {(0,) * basis.r: RatFun.const(params.names, c)})

    def variable(name: str, ln: int, col: int) -> "OrbitPoly":
        if name in basis.names:
            exps = [0] * basis.r
            exps[basis.names.index(name)] = 1
            return OrbitPoly(basis, params, {tuple(exps): RatFun.const(params.names, 1)})
        if name in params.names:
            return OrbitPoly(
                basis,
                params,
                {(0,) * basis.r: RatFun(Poly.variable(params.names, name))},
            )
        raise ParseError(f"unknown name {name!r}", ln, col)

    return _Parser(_tokenize(text, line=line), constant, variable).parse()
