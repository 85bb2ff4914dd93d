"""Expression parser for the CLI grammar.

Generators are bare identifiers from the active presentation's alphabet,
multiplication is explicit (`*`), `^` takes integer exponents (negative only
on invertible generators and scalars), and scalars use integers, `q`,
`qint(n)` and `+ - * /` with parentheses.  Juxtaposition is not multiplication.
Division requires a scalar divisor.  parse(format(p)) == p on normal forms.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .ncalg import NCPoly, Presentation
from .qscalar import ONE, QScalar, qint

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([+\-*/^()]))")

_RESERVED = {"q", "qint"}

_scalar_pres = Presentation("scalars", []).finalize()


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            tokens.append(("ident", m.group(2), m.start(2)))
        elif m.group(3):
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, pres):
        self.text = text
        self.pres = pres
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self):
        kind, _, pos = self.peek()
        if kind == "end":
            raise ParseError("empty expression", pos)
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {val!r}", pos)
        return value.normal_form()

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.factor()
                if val == "*":
                    value = value * rhs
                else:
                    value = value * self._invert(rhs, pos)
            else:
                return value

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            inner = self.factor()
            return inner if val == "+" else -inner
        value = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            n = self._signed_int()
            value = self._power(value, n, pos)
        return value

    def _signed_int(self):
        kind, val, pos = self.next()
        sign = 1
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            kind, val, pos = self.next()
        if kind != "int":
            raise ParseError("expected an integer exponent", pos)
        return sign * val

    def atom(self):
        kind, val, pos = self.next()
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "int":
            return self.pres.scalar(QScalar.from_int(val))
        if kind == "ident":
            if val == "q":
                return self.pres.scalar(QScalar.q_power(1))
            if val == "qint":
                self.expect_op("(")
                n = self._signed_int()
                self.expect_op(")")
                return self.pres.scalar(qint(n))
            if val in self.pres.by_name:
                return self.pres.gen(val)
            raise ParseError(f"unknown generator {val!r}", pos)
        raise ParseError(f"unexpected token {val!r}", pos)

    def _power(self, value, n, pos):
        if n == 0:
            return self.pres.one()
        if n < 0:
            value = self._invert(value, pos)
            n = -n
        out = value
        for _ in range(n - 1):
            out = out * value
        return out

    def _invert(self, value, pos):
        value = value.normal_form()
        if len(value.terms) != 1:
            raise ParseError("can only invert scalars and invertible monomials", pos)
        (word, coeff), = value.terms.items()
        for name, _ in word:
            if not self.pres.by_name[name].invertible:
                raise ParseError(
                    f"negative power of non-invertible generator {name!r}", pos
                )
        if not coeff:
            raise ParseError("division by zero", pos)
        inv_word = tuple((n, -e) for n, e in reversed(word))
        return NCPoly(self.pres, {inv_word: coeff.inverse()})


def parse_expression(text, pres):
    """Parse text into a normal-form NCPoly over the given presentation."""
    return _Parser(text, pres).parse()


def parse_scalar(text):
    """Parse a generator-free expression into a QScalar."""
    p = _Parser(text, _scalar_pres).parse()
    if not p.terms:
        return QScalar.from_int(0)
    (word, coeff), = p.terms.items()
    assert word == ()
    return coeff
