"""Text format for operator specs: parser and canonical printer.

Example::

    # Oleinik-Radkevic with p = 2, q = 5
    name: or_p2_q5
    expect: case=I p=2 q=5 r=0 threshold=5/2
    X1 = D1
    X2 = x1*D2
    X3 = x1^4*D3

``D1, D2, D3`` stand for the covariables xi1, xi2, xi3 (the 1/i in
D = (1/i) d has no effect on anything computed here).  Every field must be
linear in the D's with polynomial coefficients.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .fields import FieldSymbol, OperatorSpec
from .symcore import ZERO, Poly


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, expected: set[str] | None = None):
        self.line, self.column = line, column
        self.expected = sorted(expected or ())
        where = f"line {line}, column {column}: " if line else ""
        tail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{tail}")


class NonlinearInD(ParseError):
    pass


@dataclass
class SpecDocument:
    spec: OperatorSpec
    name: str | None = None
    expect: dict[str, str] = field(default_factory=dict)
    source: str = ""

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpecDocument):
            return NotImplemented
        return (self.spec, self.name, self.expect) == (other.spec, other.name, other.expect)


# ---------------------------------------------------------------------------
# expression parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


@dataclass
class _Tok:
    kind: str  # num | name | op | end
    text: str
    col: int


def _tokenize(text: str, line: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col,
                             {"number", "variable", "D1", "D2", "D3", "operator"})
        col = m.start(m.lastindex) + 1
        kind = {1: "num", 2: "name", 3: "op"}[m.lastindex]
        tok = m.group(m.lastindex)
        toks.append(_Tok(kind, "^" if tok == "**" else tok, col))
        pos = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


class _Lin:
    """c0 + c1*D1 + c2*D2 + c3*D3 with polynomial coefficients."""

    __slots__ = ("c",)

    def __init__(self, c: list[Poly]):
        self.c = c

    @property
    def has_d(self) -> bool:
        return any(not x.is_zero() for x in self.c[1:])

    def __add__(self, o: "_Lin") -> "_Lin":
        return _Lin([a + b for a, b in zip(self.c, o.c)])

    def __neg__(self) -> "_Lin":
        return _Lin([-a for a in self.c])


class _Parser:
    def __init__(self, text: str, line: int, var_names: dict[str, int]):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.line = line
        self.vars = var_names

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, expected: set[str]) -> None:
        t = self.peek()
        raise ParseError(msg, self.line, t.col, expected)

    def parse(self) -> _Lin:
        out = self.expr()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r}", {"+", "-", "*", "/", "^", "end of line"})
        return out

    def expr(self) -> _Lin:
        out = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.term()
            out = out + (rhs if op == "+" else -rhs)
        return out

    def term(self) -> _Lin:
        out = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            op_tok = self.take()
            rhs = self.unary()
            out = self._mul(out, rhs, op_tok) if op_tok.text == "*" else self._div(out, rhs, op_tok)
        return out

    def _mul(self, a: _Lin, b: _Lin, tok: _Tok) -> _Lin:
        if a.has_d and b.has_d:
            raise NonlinearInD("product of two D symbols", self.line, tok.col)
        if b.has_d:
            a, b = b, a
        s = b.c[0]
        return _Lin([x * s for x in a.c])

    def _div(self, a: _Lin, b: _Lin, tok: _Tok) -> _Lin:
        if b.has_d or not b.c[0].is_const() or b.c[0].is_zero():
            raise ParseError("can only divide by a nonzero constant", self.line, tok.col)
        d = b.c[0].const_term()
        return _Lin([x / d for x in a.c])

    def unary(self) -> _Lin:
        if self.peek().kind == "op" and self.peek().text in ("-", "+"):
            op = self.take().text
            v = self.unary()
            return -v if op == "-" else v
        return self.power()

    def power(self) -> _Lin:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            tok = self.take()
            exp = self.take()
            if exp.kind != "num":
                raise ParseError("exponent must be a non-negative integer", self.line, exp.col, {"number"})
            n = int(exp.text)
            if base.has_d:
                if n != 1:
                    raise NonlinearInD("power of a D symbol", self.line, tok.col)
                return base
            return _Lin([base.c[0] ** n, ZERO, ZERO, ZERO])
        return base

    def atom(self) -> _Lin:
        t = self.peek()
        if t.kind == "num":
            self.take()
            return _Lin([Poly.const(int(t.text)), ZERO, ZERO, ZERO])
        if t.kind == "name":
            self.take()
            if t.text in ("D1", "D2", "D3"):
                c = [ZERO, ZERO, ZERO, ZERO]
                c[int(t.text[1])] = Poly.const(1)
                return _Lin(c)
            if t.text in self.vars:
                return _Lin([Poly.var(self.vars[t.text]), ZERO, ZERO, ZERO])
            raise ParseError(f"unknown name {t.text!r}", self.line, t.col,
                             set(self.vars) | {"D1", "D2", "D3"})
        if t.kind == "op" and t.text == "(":
            self.take()
            inner = self.expr()
            if self.peek().text != ")":
                self.fail("missing ')'", {")"})
            self.take()
            return inner
        self.fail("expected an operand", {"number", "variable", "D1", "D2", "D3", "("})
        raise AssertionError  # unreachable


def parse_field(text: str, line: int = 1, var_names: dict[str, int] | None = None) -> FieldSymbol:
    names = var_names or {"x1": 1, "x2": 2, "x3": 3}
    lin = _Parser(text, line, names).parse()
    if not lin.c[0].is_zero():
        raise ParseError(f"term without a D symbol: {lin.c[0]}", line, 1)
    return FieldSymbol(*lin.c[1:])


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

_FIELD_LINE = re.compile(r"^\s*X([123])\s*=(.*)$")
_META_LINE = re.compile(r"^\s*(name|vars|expect|point|codirection)\s*:(.*)$")


def _parse_codirection(text: str, line: int) -> tuple[int, int]:
    m = re.fullmatch(r"\s*([+-]?)e([123])\s*", text)
    if not m:
        raise ParseError("codirection must look like +e3 or -e2", line, 1, {"+e1", "+e2", "+e3"})
    return int(m.group(2)), -1 if m.group(1) == "-" else 1


def parse_spec(text: str) -> SpecDocument:
    var_names = {"x1": 1, "x2": 2, "x3": 3}
    fields: dict[int, FieldSymbol] = {}
    name = None
    expect: dict[str, str] = {}
    point = (Fraction(0), Fraction(0), Fraction(0))
    codir = (3, 1)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _META_LINE.match(line)
        if m:
            key, val = m.group(1), m.group(2).strip()
            if key == "name":
                name = val
            elif key == "vars":
                names = val.split()
                if len(names) != 3:
                    raise ParseError("vars: needs exactly three names", lineno, 1)
                var_names = {n: i for i, n in enumerate(names, 1)}
            elif key == "expect":
                for tok in val.split():
                    if "=" not in tok:
                        raise ParseError(f"bad expectation {tok!r}", lineno, 1, {"key=value"})
                    k, v = tok.split("=", 1)
                    expect[k] = v
            elif key == "point":
                vals = val.split()
                if len(vals) != 3:
                    raise ParseError("point: needs three rationals", lineno, 1)
                point = tuple(Fraction(v) for v in vals)
            else:
                codir = _parse_codirection(val, lineno)
            continue
        m = _FIELD_LINE.match(line)
        if not m:
            raise ParseError("expected a field definition", lineno, 1,
                             {"X1 =", "X2 =", "X3 =", "name:", "vars:", "expect:", "point:", "codirection:"})
        j = int(m.group(1))
        if j in fields:
            raise ParseError(f"X{j} defined twice", lineno, 1)
        offset = m.start(2)
        try:
            fields[j] = parse_field(m.group(2), lineno, var_names)
        except ParseError as exc:
            if exc.column:
                exc.column += offset
                exc.args = (f"line {lineno}, column {exc.column}: " + str(exc).split(": ", 1)[1],)
            raise
    missing = [j for j in (1, 2, 3) if j not in fields]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(f'X{j}' for j in missing)}", 0, 0,
                         {f"X{j} =" for j in missing})
    spec = OperatorSpec(fields[1], fields[2], fields[3], point, codir)
    return SpecDocument(spec, name, expect, text)


def print_field(X: FieldSymbol) -> str:
    parts = []
    for i, c in enumerate(X.coeffs, 1):
        if c.is_zero():
            continue
        parts.append(f"D{i}" if c == Poly.const(1) else f"({c})*D{i}")
    return " + ".join(parts) or "0"


def print_spec(doc: SpecDocument) -> str:
    lines = []
    if doc.name:
        lines.append(f"name: {doc.name}")
    if doc.expect:
        lines.append("expect: " + " ".join(f"{k}={v}" for k, v in doc.expect.items()))
    s = doc.spec
    if any(s.base_point):
        lines.append("point: " + " ".join(str(v) for v in s.base_point))
    if s.codirection != (3, 1):
        axis, sign = s.codirection
        lines.append(f"codirection: {'-' if sign < 0 else '+'}e{axis}")
    for j, X in enumerate(s.fields, 1):
        lines.append(f"X{j} = {print_field(X)}")
    return "\n".join(lines) + "\n"
