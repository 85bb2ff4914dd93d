"""Exact arithmetic in Q(q), the field of rational functions of the deformation
parameter q over the rationals.

Values are quotients of Laurent polynomials with Fraction coefficients.  Every
operation is exact; there is no floating point anywhere.  Canonical form:
numerator and denominator are coprime, all q-power factors are pushed into the
numerator, and the denominator's lowest-degree term is 1*q^0.  Equality of
canonical forms is plain syntactic equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class LaurentPoly:
    """Finitely supported map {exponent of q -> Fraction}, zero coefficients dropped."""

    __slots__ = ("c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = Fraction(v)
                if v:
                    c[int(e)] = v
        self.c = c
        self._hash = None

    @classmethod
    def const(cls, v):
        return cls({0: Fraction(v)})

    @classmethod
    def q_power(cls, n):
        return cls({n: Fraction(1)})

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.c == other.c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.c.items())))
        return self._hash

    def __add__(self, other):
        c = dict(self.c)
        for e, v in other.c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            elif e in c:
                del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = c
        out._hash = None
        return out

    def __neg__(self):
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = {e: -v for e, v in self.c.items()}
        out._hash = None
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        c = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                w = c.get(e, 0) + v1 * v2
                if w:
                    c[e] = w
                elif e in c:
                    del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = c
        out._hash = None
        return out

    def scale(self, f):
        f = Fraction(f)
        if not f:
            return LaurentPoly()
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = {e: v * f for e, v in self.c.items()}
        out._hash = None
        return out

    def shift(self, n):
        """Multiply by q^n."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = {e + n: v for e, v in self.c.items()}
        out._hash = None
        return out

    def valuation(self):
        assert self.c, "valuation of zero"
        return min(self.c)

    def degree(self):
        assert self.c, "degree of zero"
        return max(self.c)

    def __repr__(self):
        return f"LaurentPoly({dict(sorted(self.c.items()))!r})"


ZERO_POLY = LaurentPoly()
ONE_POLY = LaurentPoly.const(1)


def _divmod_poly(a, b):
    """Ordinary polynomial division of a by b; both must have valuation >= 0."""
    assert b, "division by zero polynomial"
    r = dict(a.c)
    quo = {}
    db = b.degree()
    lead = b.c[db]
    while r:
        dr = max(r)
        if dr < db:
            break
        f = r[dr] / lead
        quo[dr - db] = f
        for e, v in b.c.items():
            e2 = e + dr - db
            w = r.get(e2, 0) - f * v
            if w:
                r[e2] = w
            elif e2 in r:
                del r[e2]
    return LaurentPoly(quo), LaurentPoly(r)


def poly_gcd(a, b):
    """gcd of two Laurent polynomials, returned with valuation 0 and lowest coefficient 1.

    q-power factors are units in the Laurent ring, so they never enter the gcd.
    """
    if not a and not b:
        return ONE_POLY
    if a:
        a = a.shift(-a.valuation())
    if b:
        b = b.shift(-b.valuation())
    while b:
        _, r = _divmod_poly(a, b)
        a, b = b, (r.shift(-r.valuation()) if r else r)
    v = a.valuation()
    if v:
        a = a.shift(-v)
    low = a.c[0]
    if low != 1:
        a = a.scale(1 / low)
    return a


def poly_div_exact(a, b):
    """a / b when b divides a exactly (up to a q-power unit)."""
    if not a:
        return ZERO_POLY
    va, vb = a.valuation(), b.valuation()
    quo, rem = _divmod_poly(a.shift(-va), b.shift(-vb))
    assert not rem, "inexact polynomial division"
    return quo.shift(va - vb)


def poly_lcm(a, b):
    assert a and b
    return poly_div_exact(a * b, poly_gcd(a, b))


class QScalar:
    """Element of Q(q) in canonical form.  Immutable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _canonical=False):
        if den is None:
            den = ONE_POLY
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_int(cls, n):
        return cls(LaurentPoly.const(n), ONE_POLY, _canonical=True) if n else ZERO

    @classmethod
    def from_fraction(cls, f):
        f = Fraction(f)
        if not f:
            return ZERO
        return cls(LaurentPoly.const(f), ONE_POLY, _canonical=True)

    @classmethod
    def q_power(cls, n):
        return cls(LaurentPoly.q_power(n), ONE_POLY, _canonical=True)

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, int):
            other = QScalar.from_int(other)
        return (
            isinstance(other, QScalar)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other):
        if self.den == other.den:
            return QScalar(self.num + other.num, self.den)
        return QScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return QScalar(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.num or not other.num:
            return ZERO
        return QScalar(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero scalar")
        return QScalar(self.den, self.num)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __repr__(self):
        return f"QScalar({self.num.c!r}, {self.den.c!r})"


def _canonicalize(num, den):
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return ZERO_POLY, ONE_POLY
    g = poly_gcd(num, den)
    if g != ONE_POLY:
        num = poly_div_exact(num, g)
        den = poly_div_exact(den, g)
    # push the denominator's q-power into the numerator, then make its lowest term 1
    v = den.valuation()
    if v:
        den = den.shift(-v)
        num = num.shift(-v)
    low = den.c[0]
    if low != 1:
        den = den.scale(1 / low)
        num = num.scale(1 / low)
    return num, den


def normalize(num, den):
    """Canonical quotient of two Laurent polynomials.  Idempotent."""
    return QScalar(num, den)


ZERO = QScalar(ZERO_POLY, ONE_POLY, _canonical=True)
ONE = QScalar(ONE_POLY, ONE_POLY, _canonical=True)
Q = QScalar.q_power(1)
QINV = QScalar.q_power(-1)


@lru_cache(maxsize=None)
def qint(n):
    """The symmetric q-integer [n] = (q^n - q^-n)/(q - q^-1), as a polynomial."""
    num = LaurentPoly({n: 1, -n: -1})
    den = LaurentPoly({1: 1, -1: -1})
    return QScalar(num, den)


@lru_cache(maxsize=None)
def qbinom(a, r, base):
    """q-binomial coefficient of the coproduct expansion, in base q or q^-1.

    base=-1 gives the coefficient of e0^r (x) k^-r e0^(a-r) in the expansion of
    the a-th coproduct power of e0; base=+1 the f0 analogue.  Closed Gaussian
    product form, validated against the expansion in the test suite.
    """
    if base not in (1, -1):
        raise ValueError(f"base must be +1 or -1, got {base!r}")
    if not 0 <= r <= a:
        raise ValueError(f"q-binomial index out of range: ({a}, {r})")
    v = QScalar.q_power(base)
    out = ONE
    for i in range(1, r + 1):
        out = out * (ONE - v ** (a - r + i)) / (ONE - v ** i)
    return out
