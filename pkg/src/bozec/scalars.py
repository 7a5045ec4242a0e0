"""Exact arithmetic in Q(q) plus q-combinatorics.

A Scalar is kept in a unique canonical form

    (cn/cd) * q**k * num(q) / den(q)

with cn/cd a reduced rational (cd > 0), k an integer, and num, den primitive
integer polynomials with nonzero constant term, positive leading coefficient
and gcd(num, den) = 1.  Zero is (0, 1, 0, 1, 1).  Equality of Scalars is
field equality of the rational functions they denote.

Polynomials are little-endian int tuples; () is the zero polynomial.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import DomainError, InvalidScalarError

Poly = tuple  # tuple[int, ...]

_PONE: Poly = (1,)


# ---------------------------------------------------------------------------
# integer polynomial helpers


def _ptrim(c: list) -> Poly:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _ptrim(out)


def _pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    if len(a) == 1:
        c = a[0]
        return b if c == 1 else tuple(c * x for x in b)
    if len(b) == 1:
        c = b[0]
        return a if c == 1 else tuple(c * x for x in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _ptrim(out)


def _pshift(a: Poly, n: int) -> Poly:
    if not a or n == 0:
        return a
    return (0,) * n + a


def _pcontent(a: Poly) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
        if g == 1:
            return 1
    return g


def _pprim(a: Poly) -> tuple[int, Poly]:
    """Split off content*sign so the leading coefficient is positive."""
    if not a:
        return 0, ()
    c = _pcontent(a)
    if a[-1] < 0:
        c = -c
    if c == 1:
        return 1, a
    return c, tuple(x // c for x in a)


def _pdeg(a: Poly) -> int:
    return len(a) - 1


def _prem(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder of a by b over Z: lc(b)^(da-db+1) * a mod b."""
    da, db = _pdeg(a), _pdeg(b)
    if da < db:
        return a
    lb = b[-1]
    r = list(a)
    for i in range(da - db, -1, -1):
        top = r[db + i]
        for j in range(len(r)):
            r[j] *= lb
        if top:
            for j, y in enumerate(b):
                r[i + j] -= top * y
        r[db + i] = 0
    while r and r[-1] == 0:
        r.pop()
    return tuple(r)


def _pgcd(a: Poly, b: Poly) -> Poly:
    """Primitive gcd with positive leading coefficient (subresultant PRS)."""
    if not a:
        return _pprim(b)[1]
    if not b:
        return _pprim(a)[1]
    _, a = _pprim(a)
    _, b = _pprim(b)
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        return _PONE
    g, h = 1, 1
    while True:
        d = _pdeg(a) - _pdeg(b)
        r = _prem(a, b)
        if not r:
            return _pprim(b)[1]
        if _pdeg(r) == 0:
            return _PONE
        a, b = b, tuple(x // (g * h**d) for x in r)
        g = a[-1]
        if d:
            h = h * g**d // h**d  # h = h^(1-d) g^d, exact by subresultant theory


def _pdivexact(a: Poly, b: Poly) -> Poly:
    """Exact quotient a/b over Q; raises if the division is not exact."""
    if not a:
        return ()
    if b == _PONE:
        return a
    qa = [Fraction(x) for x in a]
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = qa[len(b) - 1 + i] / b[-1]
        out[i] = c
        if c:
            for j, y in enumerate(b):
                qa[i + j] -= c * y
    if any(x for x in qa):
        raise ArithmeticError("inexact polynomial division")
    den = 1
    for x in out:
        den = den * x.denominator // math.gcd(den, x.denominator)
    if den != 1:
        raise ArithmeticError("inexact polynomial division")
    return _ptrim([int(x) for x in out])


def _peval_mod(a: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


# ---------------------------------------------------------------------------
# Scalar


class Scalar:
    __slots__ = ("cn", "cd", "k", "num", "den")

    def __init__(self, cn: int, cd: int, k: int, num: Poly, den: Poly, _raw: bool = False):
        if _raw:
            self.cn, self.cd, self.k, self.num, self.den = cn, cd, k, num, den
            return
        c, k, num, den = _canonical(Fraction(cn, cd), k, num, den)
        self.cn, self.cd = c.numerator, c.denominator
        self.k, self.num, self.den = k, num, den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "Scalar":
        if n == 0:
            return ZERO
        if n == 1:
            return ONE
        return Scalar(n, 1, 0, _PONE, _PONE, _raw=True)

    @staticmethod
    def from_fraction(f: Fraction) -> "Scalar":
        if f == 0:
            return ZERO
        return Scalar(f.numerator, f.denominator, 0, _PONE, _PONE, _raw=True)

    @staticmethod
    def q_power(k: int) -> "Scalar":
        return _QPOW.get(k) or Scalar(1, 1, k, _PONE, _PONE, _raw=True)

    @staticmethod
    def monomial(coeff: Union[int, Fraction], k: int) -> "Scalar":
        f = Fraction(coeff)
        if f == 0:
            return ZERO
        return Scalar(f.numerator, f.denominator, k, _PONE, _PONE, _raw=True)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.cn == 0

    def is_one(self) -> bool:
        return (self.cn, self.cd, self.k, self.num, self.den) == (1, 1, 0, _PONE, _PONE)

    def is_laurent_polynomial(self) -> bool:
        return self.den == _PONE

    def __bool__(self) -> bool:
        return self.cn != 0

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.cn == 0:
            return self
        if self.cn == 0:
            return other
        k = min(self.k, other.k)
        if self.den == other.den:
            # common (most often trivial) denominator: no gcd pass needed
            # beyond re-normalising num against den
            lcd = self.cd * other.cd // math.gcd(self.cd, other.cd)
            a = _pmul((self.cn * lcd // self.cd,), _pshift(self.num, self.k - k))
            b = _pmul((other.cn * lcd // other.cd,), _pshift(other.num, other.k - k))
            return Scalar(1, lcd, k, _padd(a, b), self.den)
        a = _pmul(
            _pshift(self.num, self.k - k),
            _pmul((self.cn * other.cd,), other.den),
        )
        b = _pmul(
            _pshift(other.num, other.k - k),
            _pmul((other.cn * self.cd,), self.den),
        )
        return Scalar(1, self.cd * other.cd, k, _padd(a, b), _pmul(self.den, other.den))

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __neg__(self) -> "Scalar":
        if self.cn == 0:
            return self
        return Scalar(-self.cn, self.cd, self.k, self.num, self.den, _raw=True)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.cn == 0 or other.cn == 0:
            return ZERO
        if self.num == _PONE and self.den == _PONE:
            return Scalar(
                self.cn * other.cn, self.cd * other.cd, self.k + other.k, other.num, other.den
            )
        if other.num == _PONE and other.den == _PONE:
            return Scalar(
                self.cn * other.cn, self.cd * other.cd, self.k + other.k, self.num, self.den
            )
        if self.den == _PONE and other.den == _PONE:
            return Scalar(
                self.cn * other.cn,
                self.cd * other.cd,
                self.k + other.k,
                _pmul(self.num, other.num),
                _PONE,
            )
        # cross-cancel before multiplying to keep degrees down
        g1 = _pgcd(self.num, other.den)
        g2 = _pgcd(other.num, self.den)
        n1 = _pdivexact(self.num, g1)
        d2 = _pdivexact(other.den, g1)
        n2 = _pdivexact(other.num, g2)
        d1 = _pdivexact(self.den, g2)
        return Scalar(
            self.cn * other.cn,
            self.cd * other.cd,
            self.k + other.k,
            _pmul(n1, n2),
            _pmul(d1, d2),
        )

    def inverse(self) -> "Scalar":
        if self.cn == 0:
            raise InvalidScalarError("division by zero scalar")
        return Scalar(self.cd, self.cn, -self.k, self.den, self.num)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        return self * other.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n == 0:
            return ONE
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def bar(self) -> "Scalar":
        """The involution q -> q^(-1)."""
        if self.cn == 0:
            return self
        dn, dd = _pdeg(self.num), _pdeg(self.den)
        rn = tuple(reversed(self.num))
        rd = tuple(reversed(self.den))
        return Scalar(self.cn, self.cd, -self.k - dn + dd, rn, rd)

    # -- structure ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return (
            self.cn == other.cn
            and self.cd == other.cd
            and self.k == other.k
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.cn, self.cd, self.k, self.num, self.den))

    def rational(self) -> Fraction:
        return Fraction(self.cn, self.cd)

    def as_fraction_pair(self) -> tuple[Poly, Poly, Fraction, int]:
        """(num, den, rational prefactor, q-shift) of the canonical form."""
        return self.num, self.den, Fraction(self.cn, self.cd), self.k

    def eval_mod(self, x: int, p: int) -> int:
        """Evaluate at q = x over F_p; raises ZeroDivisionError if den vanishes."""
        d = _peval_mod(self.den, x, p)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        n = _peval_mod(self.num, x, p) * self.cn % p
        v = n * pow(self.cd * d, -1, p) % p
        return v * pow(x, self.k % (p - 1), p) % p

    # -- printing / parsing --------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"


def _canonical(c: Fraction, k: int, num: Iterable, den: Iterable) -> tuple[Fraction, int, Poly, Poly]:
    num = _ptrim(list(num))
    den = _ptrim(list(den))
    if not den:
        raise InvalidScalarError("zero denominator")
    if not num or c == 0:
        return Fraction(0), 0, _PONE, _PONE
    # strip q-valuations into the shift
    v = 0
    while num[v] == 0:
        v += 1
    if v:
        k += v
        num = num[v:]
    v = 0
    while den[v] == 0:
        v += 1
    if v:
        k -= v
        den = den[v:]
    cn_, num = _pprim(num)
    cd_, den = _pprim(den)
    c = c * Fraction(cn_, cd_)
    if num != _PONE and den != _PONE:
        g = _pgcd(num, den)
        if g != _PONE:
            num = _pdivexact(num, g)
            den = _pdivexact(den, g)
    return c, k, num, den


ZERO = Scalar(0, 1, 0, _PONE, _PONE, _raw=True)
ONE = Scalar(1, 1, 0, _PONE, _PONE, _raw=True)
MINUS_ONE = Scalar(-1, 1, 0, _PONE, _PONE, _raw=True)
Q = Scalar(1, 1, 1, _PONE, _PONE, _raw=True)
_QPOW = {0: ONE, 1: Q, -1: Scalar(1, 1, -1, _PONE, _PONE, _raw=True)}


def normalize(num: Iterable, den: Iterable) -> Scalar:
    """Canonical representative of num/den for integer/Fraction coefficient lists."""
    num = [Fraction(x) for x in num]
    den = [Fraction(x) for x in den]
    cd = 1
    for x in num:
        cd = cd * x.denominator // math.gcd(cd, x.denominator)
    cn = 1
    for x in den:
        cn = cn * x.denominator // math.gcd(cn, x.denominator)
    return Scalar(cn, cd, 0, [int(x * cd) for x in num], [int(x * cn) for x in den])


# ---------------------------------------------------------------------------
# q-combinatorics


@lru_cache(maxsize=None)
def q_int(n: int, d: int = 1) -> Scalar:
    """Balanced q-integer [n] at q_i = q^d, for n >= 0."""
    if n < 0:
        raise DomainError(f"q_int requires n >= 0, got {n}")
    if d <= 0:
        raise DomainError(f"q_int requires d > 0, got {d}")
    if n == 0:
        return ZERO
    coeffs = [0] * (2 * d * (n - 1) + 1)
    for j in range(n):
        coeffs[2 * d * j] = 1
    return Scalar(1, 1, -d * (n - 1), tuple(coeffs), _PONE, _raw=True)


def _q_int_signed(n: int, d: int = 1) -> Scalar:
    if n >= 0:
        return q_int(n, d)
    return -q_int(-n, d)


@lru_cache(maxsize=None)
def q_fact(n: int, d: int = 1) -> Scalar:
    if n < 0:
        raise DomainError(f"q_fact requires n >= 0, got {n}")
    out = ONE
    for kk in range(1, n + 1):
        out = out * q_int(kk, d)
    return out


@lru_cache(maxsize=None)
def q_binom(n: int, k: int, d: int = 1) -> Scalar:
    """Balanced Gaussian binomial [n over k] at q_i = q^d, integer n, k >= 0."""
    if k < 0:
        raise DomainError(f"q_binom requires k >= 0, got {k}")
    if 0 <= n < k:
        return ZERO
    out = ONE
    for s in range(1, k + 1):
        out = out * _q_int_signed(n - s + 1, d)
    return out / q_fact(k, d)


# ---------------------------------------------------------------------------
# Laurent series in q^{-1}


class LaurentSeries:
    """Truncated Laurent series in q^(-1): sum of c_e * q^(-e) for e < order.

    ``coeffs`` maps the exponent e of q^(-1) (possibly negative, i.e. positive
    powers of q) to an exact Fraction; only exponents below ``order`` are kept.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: dict, order: int):
        self.coeffs = {e: Fraction(c) for e, c in coeffs.items() if c != 0 and e < order}
        self.order = order

    def coefficient(self, e: int) -> Fraction:
        if e >= self.order:
            raise DomainError(f"coefficient q^-{e} beyond truncation order {self.order}")
        return self.coeffs.get(e, Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        terms = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                terms.append(str(c))
            else:
                terms.append(f"{c}*q^{-e}")
        return " + ".join(terms) if terms else "0"

    def in_one_plus_nonneg_tail(self) -> bool:
        """Membership of 1 + q^(-1)*Z>=0[[q^(-1)]] to the truncation order."""
        if any(e < 0 for e in self.coeffs):
            return False
        if self.order > 0 and self.coefficient(0) != 1:
            return False
        for e in range(1, self.order):
            c = self.coefficient(e)
            if c.denominator != 1 or c < 0:
                return False
        return True


def expand_series(s: Scalar, order: int) -> LaurentSeries:
    """Exact expansion of s at q = infinity: coefficients of q^0 .. q^-(order-1).

    Exponents of q^(-1) below zero (finitely many positive q-powers) are kept
    as well, so every rational function admits an expansion.
    """
    if order < 0:
        raise DomainError("order must be >= 0")
    if s.is_zero():
        return LaurentSeries({}, order)
    c = Fraction(s.cn, s.cd)
    # in u = q^(-1): num(q) = u^(-deg num) * rev(num)(u), likewise den
    rn = tuple(reversed(s.num))
    rd = tuple(reversed(s.den))
    offset = (_pdeg(s.den) - _pdeg(s.num)) - s.k  # power of u multiplying rn/rd
    # series division rn/rd in u, rd[0] != 0 by canonical form
    need = order - offset
    if need <= 0:
        return LaurentSeries({}, order)
    out = {}
    coef = [Fraction(0)] * need
    for n in range(need):
        acc = Fraction(rn[n]) if n < len(rn) else Fraction(0)
        for j in range(max(0, n - len(rd) + 1), n):
            acc -= coef[j] * rd[n - j]
        coef[n] = acc / rd[0]
        if coef[n]:
            out[n + offset] = c * coef[n]
    return LaurentSeries(out, order)


# ---------------------------------------------------------------------------
# string form: integer-coefficient fraction syntax


def _format_poly(num: Poly, shift: int, coeff: Fraction) -> str:
    """Render coeff * q^shift * num with integer-coefficient terms."""
    terms = []
    for e in range(len(num) - 1, -1, -1):
        c = num[e] * coeff
        if c == 0:
            continue
        ex = e + shift
        mag = abs(c)
        if ex == 0:
            body = str(mag)
        else:
            qq = "q" if ex == 1 else f"q^{ex}"
            body = qq if mag == 1 else f"{mag}*{qq}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign0, body0 = terms[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in terms[1:]:
        out += sign + body
    return out


def format_scalar(s: Scalar) -> str:
    """Canonical string in integer/rational fraction syntax, e.g.
    "(q^2+1)/(q-1)" or "-1/2*q^3"."""
    if s.is_zero():
        return "0"
    c = Fraction(s.cn, s.cd)
    nterms = sum(1 for x in s.num if x)
    numstr = _format_poly(s.num, s.k, c)
    if s.den == _PONE:
        return numstr
    denstr = _format_poly(s.den, 0, Fraction(1))
    if nterms > 1:
        numstr = f"({numstr})"
    return f"{numstr}/({denstr})"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, what: str):
        raise InvalidScalarError(f"cannot parse scalar {self.text!r}: {what} at {self.pos}")

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> Scalar:
        t = self.term()
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                t = t + self.term()
            elif c == "-":
                self.pos += 1
                t = t - self.term()
            else:
                return t

    def term(self) -> Scalar:
        t = self.factor()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                t = t * self.factor()
            elif c == "/":
                self.pos += 1
                t = t / self.factor()
            else:
                return t

    def factor(self) -> Scalar:
        c = self.peek()
        if c == "-":
            self.pos += 1
            return -self.factor()
        if c == "+":
            self.pos += 1
            return self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            return base ** self.intlit()
        return base

    def intlit(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        c = self.peek()
        if not c.isdigit():
            self.error("expected integer")
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return sign * int(self.text[start : self.pos])

    def atom(self) -> Scalar:
        c = self.peek()
        if c == "(":
            self.pos += 1
            val = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return val
        if c == "q":
            self.pos += 1
            return Q
        if c.isdigit():
            return Scalar.from_int(self.intlit())
        self.error("expected atom")


def parse_scalar(text: str) -> Scalar:
    p = _Parser(text)
    val = p.expr()
    if p.peek() != "":
        p.error("trailing input")
    return val
