"""Recursive-descent parser for polynomial and derivation strings.

Grammar (a superset of the plain sum-of-terms form, adding '*' and parentheses)::

    expr   := sign? term (('+' | '-') term)*
    term   := factor ('*'? factor)*
    factor := atom ('^' uint)?
    atom   := uint | var | '(' expr ')'

Derivation strings are sums of ``poly * dvar`` terms, e.g. ``x*dx + (1+y)*dy``.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .ffpoly import Poly, PrimeField, default_names, pow_

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, field, names, allow_d=False):
        self.text = text
        self.field = field
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.dnames = {f"d{n}": i for i, n in enumerate(self.names)} if allow_d else {}
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2])

    def expect_end(self):
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")

    def const(self, c):
        return Poly.constant(self.field, self.nvars, c)

    def expr(self):
        sign = 1
        if self.peek()[:2] in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _starts_factor(self):
        kind, val, _ = self.peek()
        if kind in ("int",):
            return True
        if kind == "name":
            return val not in self.dnames
        return kind == "op" and val == "("

    def term(self):
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                nxt = self.tokens[self.i + 1]
                if nxt[0] == "name" and nxt[1] in self.dnames:
                    return acc
                self.take()
                acc = acc * self.factor()
            elif self._starts_factor():
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, off = self.peek()
            if kind != "int":
                self.error("expected an exponent")
            self.take()
            base = pow_(base, int(val))
        return base

    def atom(self):
        kind, val, off = self.peek()
        if kind == "int":
            self.take()
            return self.const(int(val))
        if kind == "name":
            if val not in self.index:
                if val in self.dnames:
                    self.error(f"misplaced {val!r}")
                self.error(f"unknown variable {val!r}")
            self.take()
            return Poly.var(self.field, self.nvars, self.index[val])
        if kind == "op" and val == "(":
            self.take()
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return inner
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {val!r}")

    def derivation(self):
        comps = [Poly.zero(self.field, self.nvars) for _ in range(self.nvars)]
        first = True
        while True:
            sign = 1
            if self.peek()[:2] in (("op", "+"), ("op", "-")):
                sign = -1 if self.take()[1] == "-" else 1
            elif not first:
                break
            first = False
            kind, val, _ = self.peek()
            if kind == "name" and val in self.dnames:
                coeff = self.const(1)
            else:
                coeff = self.term()
                if self.peek()[:2] == ("op", "*"):
                    self.take()
                kind, val, _ = self.peek()
                if not (kind == "name" and val in self.dnames):
                    self.error("expected a coordinate derivation such as 'dx'")
            self.take()
            v = self.dnames[val]
            comps[v] = comps[v] + (coeff if sign > 0 else -coeff)
            if self.peek()[0] == "end":
                break
        self.expect_end()
        return tuple(comps)


def _field(p):
    return p if isinstance(p, PrimeField) else PrimeField(p)


def parse_poly(text: str, p, nvars: int = 2, names=None) -> Poly:
    field = _field(p)
    names = names or default_names(nvars)
    parser = _Parser(text, field, names)
    if parser.peek()[0] == "end":
        parser.error("empty polynomial")
    result = parser.expr()
    parser.expect_end()
    return result


def parse_derivation(text: str, p, nvars: int = 2, names=None):
    """Parse ``"x*dx + (1+y)*dy"`` into a tuple of component polynomials."""
    field = _field(p)
    names = names or default_names(nvars)
    parser = _Parser(text, field, names, allow_d=True)
    if text.strip() == "0":
        return tuple(Poly.zero(field, len(names)) for _ in names)
    if parser.peek()[0] == "end":
        parser.error("empty derivation")
    return parser.derivation()


def format_derivation(components, names=None) -> str:
    """Canonical derivation string; inverse of :func:`parse_derivation`."""
    components = tuple(components)
    names = names or default_names(len(components))
    parts = []
    for name, c in zip(names, components):
        if c.is_zero():
            continue
        body = c.to_string(names)
        if len(c.terms) > 1:
            parts.append(f"({body})*d{name}")
        elif body == "1":
            parts.append(f"d{name}")
        else:
            parts.append(f"{body}*d{name}")
    return " + ".join(parts) if parts else "0"
