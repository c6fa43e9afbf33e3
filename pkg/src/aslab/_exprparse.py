"""Tiny recursive-descent parser for polynomial and field-element strings.

Evaluates expressions like "X^2-X-Z", "t+1", "(Z^2+1)/(Z+1)" over arbitrary
values: the caller supplies a table mapping identifiers to values and a
lifting function for integer literals, and the values themselves carry the
ring operations through the usual Python operators.  Adjacent factors
multiply, so "2X" and "(t+1)Z^2" parse as expected.
"""

import re

from .errors import InputError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(s):
    tokens = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            if s[pos:].strip():
                raise InputError(f"cannot parse {s!r} at position {pos}")
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2)))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, atoms, make_int):
        self.tokens = tokens
        self.pos = 0
        self.atoms = atoms
        self.make_int = make_int

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self):
        kind, val = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.next()
            negate = val == "-"
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                acc = acc - rhs if val == "-" else acc + rhs
            else:
                return acc

    def term(self):
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.power()
                acc = acc / rhs if val == "/" else acc * rhs
            elif kind in ("int", "ident") or (kind == "op" and val == "("):
                acc = acc * self.power()  # juxtaposition
            else:
                return acc

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, exp = self.next()
            if kind != "int":
                raise InputError("exponent must be a nonnegative integer")
            base = base ** exp
        return base

    def atom(self):
        kind, val = self.next()
        if kind == "int":
            return self.make_int(val)
        if kind == "ident":
            if val not in self.atoms:
                raise InputError(f"unknown symbol {val!r}")
            return self.atoms[val]
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val = self.next()
            if (kind, val) != ("op", ")"):
                raise InputError("unbalanced parentheses")
            return inner
        raise InputError(f"unexpected token {val!r}")


def parse_expression(s, atoms, make_int):
    """Parse s into a value, resolving identifiers through atoms."""
    tokens = _tokenize(s)
    if not tokens:
        raise InputError("empty expression")
    parser = _Parser(tokens, atoms, make_int)
    result = parser.expr()
    if parser.pos != len(tokens):
        raise InputError(f"trailing garbage in {s!r}")
    return result
