"""Exact fields: Q, Q(sqrt d), F_p and F_{p^2}.

Rationals are gmpy2 ``mpq`` values; the other fields use small immutable
element classes that support the usual arithmetic operators and coerce
Python ints (and, for quadratic fields, rationals) on either side.
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import math
import re
from functools import cache

import gmpy2
from gmpy2 import mpq, mpz

__all__ = [
    "QQ",
    "Field",
    "FieldMismatchError",
    "Fp2Element",
    "FpElement",
    "PrimeField",
    "PrimeSquareField",
    "QuadElement",
    "QuadraticField",
    "Rationals",
    "Stufe",
    "arith",
    "factor_int",
    "field_of",
    "flipped_positive",
    "is_square",
    "lex_positive",
    "mult_order",
    "parse_field",
    "positive",
    "positivity_convention",
    "reduce_at_inert_prime",
    "residue_field",
    "squarefree_part",
    "stufe",
    "two_square_witness",
    "valuation_at_inert_prime",
]


class FieldMismatchError(ValueError):
    pass


@cache
def factor_int(n):
    """Prime factorisation of a nonzero integer as a sorted tuple of (p, e)."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    if n == 1:
        return ()
    from sympy import factorint

    return tuple(sorted(factorint(n).items()))


def squarefree_part(n):
    """Signed squarefree part of a nonzero integer."""
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factor_int(n):
        if e & 1:
            out *= p
    return sign * out


def _is_squarefree(n):
    return all(e == 1 for _, e in factor_int(n))


def _vp(n, p):
    """p-adic valuation of a nonzero integer."""
    n = mpz(n)
    if n == 0:
        raise ValueError("valuation of 0")
    return int(gmpy2.remove(n, p)[1])


def _vq(x, p):
    x = mpq(x)
    return _vp(x.numerator, p) - _vp(x.denominator, p)


def _rat_is_square(x):
    x = mpq(x)
    if x < 0:
        return False
    if x == 0:
        return True
    return gmpy2.is_square(x.numerator) and gmpy2.is_square(x.denominator)


def _rat_sqrt(x):
    x = mpq(x)
    return mpq(gmpy2.isqrt(x.numerator), gmpy2.isqrt(x.denominator))


# ---------------------------------------------------------------------------
# fields


class Field:
    """Common interface. Elements are produced by calling the field."""

    is_finite = False
    is_formally_real = False
    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_square(self, x):
        return self.sqrt(x) is not None

    def sqrt(self, x):
        raise NotImplementedError

    def lex_positive(self, x):
        raise NotImplementedError

    @property
    def nonsquare(self):
        """First non-square among the elements (finite fields only)."""
        ns = self.__dict__.get("_nonsquare")
        if ns is None:
            ns = next((x for x in self.elements() if x and not self.is_square(x)), None)
            if ns is None:
                raise ValueError(f"every element of {self} is a square")
            self.__dict__["_nonsquare"] = ns
        return ns

    def parse(self, text):
        raise NotImplementedError

    def format(self, x):
        return str(x)

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"


class Rationals(Field):
    def __call__(self, x):
        if isinstance(x, QuadElement):
            if x.b != 0:
                raise FieldMismatchError(f"{x} is not rational")
            return x.a
        if isinstance(x, str):
            return self.parse(x)
        return mpq(x)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __str__(self):
        return "Q"

    def contains(self, x):
        return type(x) is type(mpq(0)) or isinstance(x, int)

    def sqrt(self, x):
        x = mpq(x)
        return _rat_sqrt(x) if _rat_is_square(x) else None

    def is_square(self, x):
        return _rat_is_square(x)

    def lex_positive(self, x):
        if x == 0:
            raise ValueError("positivity of 0")
        return x > 0

    def parse(self, text):
        text = text.strip().replace(" ", "")
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ValueError(f"bad rational literal {text!r}")
        val = mpq(text)
        return val

    def format(self, x):
        return str(mpq(x))

    def random_element(self, rng, height, nonzero=False):
        while True:
            x = mpq(rng.randint(-height, height), rng.randint(1, height))
            if x != 0 or not nonzero:
                return x

    @property
    def is_formally_real(self):
        return True


QQ = Rationals()


class QuadraticField(Field):
    """Q(sqrt(d)) for a squarefree integer d not in {0, 1}."""

    def __init__(self, d):
        d = int(d)
        if d in (0, 1) or not _is_squarefree(d):
            raise ValueError(f"d={d} must be squarefree and not 0 or 1")
        self.d = d
        self.gen = QuadElement(mpq(0), mpq(1), self)

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self):
        return hash(("Q(sqrt)", self.d))

    def __str__(self):
        return f"Q(sqrt,{self.d})"

    def __call__(self, x, b=0):
        if isinstance(x, QuadElement):
            if x.K.d != self.d:
                raise FieldMismatchError(f"{x} is not in {self}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (FpElement, Fp2Element)):
            raise FieldMismatchError(f"{x} is not in {self}")
        return QuadElement(mpq(x), mpq(b), self)

    @property
    def is_formally_real(self):
        return self.d > 0

    def sqrt(self, x):
        x = self(x)
        a, b, d = x.a, x.b, self.d
        if b == 0:
            if _rat_is_square(a):
                return self(_rat_sqrt(a))
            if _rat_is_square(a / d):
                return QuadElement(mpq(0), _rat_sqrt(a / d), self)
            return None
        # (u + v r)^2 = a + b r  <=>  u^4 - a u^2 + d b^2/4 = 0, v = b/(2u)
        disc = a * a - d * b * b
        if not _rat_is_square(disc):
            return None
        root = _rat_sqrt(disc)
        for u2 in ((a + root) / 2, (a - root) / 2):
            if u2 != 0 and _rat_is_square(u2):
                u = _rat_sqrt(u2)
                y = QuadElement(u, b / (2 * u), self)
                if y * y == x:
                    return y
        return None

    def lex_positive(self, x):
        x = self(x)
        if x.a != 0:
            return x.a > 0
        if x.b != 0:
            return x.b > 0
        raise ValueError("positivity of 0")

    def real_sign(self, x, embedding=1):
        """Sign of a + b*s*sqrt(d) under the real embedding with s = +-1."""
        if self.d < 0:
            raise ValueError("imaginary quadratic field has no real embeddings")
        x = self(x)
        a, b = x.a, x.b * embedding
        # sign of a + b sqrt(d), exactly
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0 or (a > 0) == (b > 0):
            return 1 if b > 0 else -1
        big = a * a - b * b * self.d
        sa = 1 if a > 0 else -1
        return sa if big > 0 else -sa

    _term = re.compile(r"([+-]?)([^+-]+)")

    def parse(self, text):
        """Literals like ``1/2``, ``-3*r``, ``1/2-1/2*r``, ``r/3``.

        ``r`` stands for sqrt(d); ``i`` is accepted for Q(i).
        """
        src = text
        text = text.strip().replace(" ", "")
        if self.d == -1:
            text = text.replace("i", "r")
        if not text:
            raise ValueError(f"empty literal for {self}")
        a = mpq(0)
        b = mpq(0)
        pos = 0
        for m in self._term.finditer(text):
            if m.start() != pos:
                raise ValueError(f"bad literal {src!r} at position {pos}")
            pos = m.end()
            sign = -1 if m.group(1) == "-" else 1
            body = m.group(2)
            if "r" in body:
                mm = re.fullmatch(r"(?:(\d+(?:/\d+)?)\*)?r(?:/(\d+))?", body)
                if not mm:
                    raise ValueError(f"bad literal {src!r} at position {m.start(2)}")
                coef = mpq(mm.group(1)) if mm.group(1) else mpq(1)
                if mm.group(2):
                    coef /= int(mm.group(2))
                b += sign * coef
            else:
                if not re.fullmatch(r"\d+(/\d+)?", body):
                    raise ValueError(f"bad literal {src!r} at position {m.start(2)}")
                a += sign * mpq(body)
        if pos != len(text):
            raise ValueError(f"bad literal {src!r} at position {pos}")
        return QuadElement(a, b, self)

    def format(self, x):
        x = self(x)
        if x.b == 0:
            return str(x.a)
        bs = "r" if x.b == 1 else "-r" if x.b == -1 else f"{x.b}*r"
        if x.a == 0:
            return bs
        return f"{x.a}{bs}" if bs.startswith("-") else f"{x.a}+{bs}"

    def random_element(self, rng, height, nonzero=False):
        while True:
            a = QQ.random_element(rng, height)
            b = QQ.random_element(rng, height) if rng.random() < 0.7 else mpq(0)
            x = QuadElement(a, b, self)
            if not nonzero or x != 0:
                return x


class QuadElement:
    """a + b*sqrt(d) with rational a, b."""

    __slots__ = ("K", "a", "b")

    def __init__(self, a, b, K):
        self.a = a
        self.b = b
        self.K = K

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            if other.K.d != self.K.d:
                raise FieldMismatchError(f"{self.K} vs {other.K}")
            return other
        if isinstance(other, (int, type(self.a))):
            return QuadElement(mpq(other), mpq(0), self.K)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a + o.a, self.b + o.b, self.K)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a - o.a, self.b - o.b, self.K)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.K)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, e = self.a, self.b, o.a, o.b
        return QuadElement(a * c + self.K.d * b * e, a * e + b * c, self.K)

    __rmul__ = __mul__

    def norm(self):
        return self.a * self.a - self.K.d * self.b * self.b

    def conj(self):
        return QuadElement(self.a, -self.b, self.K)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0")
        return QuadElement(self.a / n, -self.b / n, self.K)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadElement(mpq(1), mpq(0), self.K)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadElement):
            return self.K.d == other.K.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, type(self.a))):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.K.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return self.K.format(self)

    __str__ = __repr__


class PrimeField(Field):
    is_finite = True

    def __init__(self, p):
        p = int(p)
        if p < 3 or not gmpy2.is_prime(p):
            raise ValueError(f"p={p} must be an odd prime")
        self.p = p
        self.characteristic = p
        self.order = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __str__(self):
        return f"Fp({self.p})"

    def __call__(self, x):
        if isinstance(x, FpElement):
            if x.K.p != self.p:
                raise FieldMismatchError(f"{x} is not in {self}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (QuadElement, Fp2Element)):
            raise FieldMismatchError(f"{x} is not in {self}")
        x = mpq(x)
        num = int(x.numerator) % self.p
        den = int(x.denominator) % self.p
        if den == 0:
            raise ZeroDivisionError("denominator divisible by p")
        return FpElement(num * pow(den, -1, self.p) % self.p, self)

    def elements(self):
        return [FpElement(v, self) for v in range(self.p)]

    def sqrt(self, x):
        x = self(x)
        if x.v == 0:
            return x
        if gmpy2.legendre(x.v, self.p) != 1:
            return None
        from sympy.ntheory import sqrt_mod

        return FpElement(int(sqrt_mod(x.v, self.p)), self)

    def is_square(self, x):
        x = self(x)
        return x.v == 0 or gmpy2.legendre(x.v, self.p) == 1

    def lex_positive(self, x):
        x = self(x)
        if x.v == 0:
            raise ValueError("positivity of 0")
        return x.v <= (self.p - 1) // 2

    def parse(self, text):
        text = text.strip()
        if not re.fullmatch(r"[+-]?\d+", text):
            raise ValueError(f"bad F_p literal {text!r}")
        return self(int(text))

    def random_element(self, rng, height=None, nonzero=False):
        lo = 1 if nonzero else 0
        return FpElement(rng.randint(lo, self.p - 1), self)


class FpElement:
    __slots__ = ("K", "v")

    def __init__(self, v, K):
        self.v = v
        self.K = K

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.K.p != self.K.p:
                raise FieldMismatchError(f"{self.K} vs {other.K}")
            return other.v
        if isinstance(other, int):
            return other % self.K.p
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement((self.v + o) % self.K.p, self.K)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement((self.v - o) % self.K.p, self.K)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement((o - self.v) % self.K.p, self.K)

    def __neg__(self):
        return FpElement(-self.v % self.K.p, self.K)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(self.v * o % self.K.p, self.K)

    __rmul__ = __mul__

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0")
        return FpElement(pow(self.v, -1, self.K.p), self.K)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by 0")
        return FpElement(self.v * pow(o, -1, self.K.p) % self.K.p, self.K)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(o, self.K) / self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElement(pow(self.v, n, self.K.p), self.K)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.K.p == other.K.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.K.p
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


def _smallest_nonresidue(p):
    n = 2
    while gmpy2.legendre(n, p) != -1:
        n += 1
    return n


class PrimeSquareField(Field):
    """F_p[x]/(x^2 + m1*x + m0) for an irreducible monic quadratic."""

    is_finite = True

    def __init__(self, p, m1=None, m0=None):
        p = int(p)
        if p < 3 or not gmpy2.is_prime(p):
            raise ValueError(f"p={p} must be an odd prime")
        if m1 is None and m0 is None:
            m1, m0 = 0, -_smallest_nonresidue(p)
        m1, m0 = int(m1) % p, int(m0) % p
        disc = (m1 * m1 - 4 * m0) % p
        if disc == 0 or gmpy2.legendre(disc, p) == 1:
            raise ValueError(f"x^2+{m1}x+{m0} is reducible over F_{p}")
        self.p = p
        self.m1 = m1
        self.m0 = m0
        self.characteristic = p
        self.order = p * p
        self.root = Fp2Element(0, 1, self)

    def __eq__(self, other):
        return (isinstance(other, PrimeSquareField) and other.p == self.p
                and other.m1 == self.m1 and other.m0 == self.m0)

    def __hash__(self):
        return hash(("Fp2", self.p, self.m1, self.m0))

    def __str__(self):
        if (self.m1, self.m0) == (0, (-_smallest_nonresidue(self.p)) % self.p):
            return f"Fp2({self.p})"
        return f"Fp2({self.p},{self.m1},{self.m0})"

    def __call__(self, x, c1=0):
        if isinstance(x, Fp2Element):
            if x.K != self:
                raise FieldMismatchError(f"{x} is not in {self}")
            return x
        if isinstance(x, FpElement):
            if x.K.p != self.p:
                raise FieldMismatchError(f"{x} is not in {self}")
            return Fp2Element(x.v, c1 % self.p, self)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, QuadElement):
            raise FieldMismatchError(f"{x} is not in {self}")
        x = mpq(x)
        num, den = int(x.numerator) % self.p, int(x.denominator) % self.p
        return Fp2Element(num * pow(den, -1, self.p) % self.p, c1 % self.p, self)

    def elements(self):
        return [Fp2Element(a, b, self) for b in range(self.p) for a in range(self.p)]

    def is_square(self, x):
        x = self(x)
        if not x:
            return True
        return x ** ((self.order - 1) // 2) == 1

    def sqrt(self, x):
        x = self(x)
        if not self.is_square(x):
            return None
        for y in self.elements():
            if y * y == x:
                return y
        return None

    def lex_positive(self, x):
        x = self(x)
        half = (self.p - 1) // 2
        if x.c0 != 0:
            return x.c0 <= half
        if x.c1 != 0:
            return x.c1 <= half
        raise ValueError("positivity of 0")

    def parse(self, text):
        text = text.strip().replace(" ", "")
        m = re.fullmatch(r"([+-]?\d+(?![\d*x]))?(?:([+-]?\d*)\*?x)?", text)
        if not text or not m:
            raise ValueError(f"bad F_p^2 literal {text!r}")
        c0 = int(m.group(1)) if m.group(1) else 0
        c1 = 0
        if m.group(2) is not None:
            g = m.group(2)
            c1 = 1 if g in ("", "+") else -1 if g == "-" else int(g)
        return Fp2Element(c0 % self.p, c1 % self.p, self)

    def format(self, x):
        if x.c1 == 0:
            return str(x.c0)
        lin = "x" if x.c1 == 1 else f"{x.c1}*x"
        return lin if x.c0 == 0 else f"{x.c0}+{lin}"

    def random_element(self, rng, height=None, nonzero=False):
        while True:
            x = Fp2Element(rng.randrange(self.p), rng.randrange(self.p), self)
            if x or not nonzero:
                return x


class Fp2Element:
    __slots__ = ("K", "c0", "c1")

    def __init__(self, c0, c1, K):
        self.c0 = c0
        self.c1 = c1
        self.K = K

    def _coerce(self, other):
        if isinstance(other, Fp2Element):
            if other.K != self.K:
                raise FieldMismatchError(f"{self.K} vs {other.K}")
            return other
        if isinstance(other, (int, FpElement)):
            return self.K(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.K.p
        return Fp2Element((self.c0 + o.c0) % p, (self.c1 + o.c1) % p, self.K)

    __radd__ = __add__

    def __neg__(self):
        p = self.K.p
        return Fp2Element(-self.c0 % p, -self.c1 % p, self.K)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        K = self.K
        p = K.p
        # x^2 = -m1 x - m0
        a0, a1, b0, b1 = self.c0, self.c1, o.c0, o.c1
        hi = a1 * b1
        c0 = (a0 * b0 - hi * K.m0) % p
        c1 = (a0 * b1 + a1 * b0 - hi * K.m1) % p
        return Fp2Element(c0, c1, K)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = Fp2Element(1, 0, self.K)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of 0")
        return self ** (self.K.order - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Fp2Element):
            return self.K == other.K and self.c0 == other.c0 and self.c1 == other.c1
        if isinstance(other, (int, FpElement)):
            o = self.K(other)
            return self.c0 == o.c0 and self.c1 == o.c1
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.c0, self.c1))

    def __bool__(self):
        return self.c0 != 0 or self.c1 != 0

    def __repr__(self):
        return self.K.format(self)


# ---------------------------------------------------------------------------
# field grammar

_FIELD_RE = [
    (re.compile(r"Q"), lambda m: QQ),
    (re.compile(r"Q\(i\)"), lambda m: QuadraticField(-1)),
    (re.compile(r"Q\(sqrt,\s*([+-]?\d+)\)"), lambda m: QuadraticField(int(m.group(1)))),
    (re.compile(r"Fp\((\d+)\)"), lambda m: PrimeField(int(m.group(1)))),
    (re.compile(r"Fp2\((\d+)\)"), lambda m: PrimeSquareField(int(m.group(1)))),
    (re.compile(r"Fp2\((\d+),\s*(\d+),\s*(\d+)\)"),
     lambda m: PrimeSquareField(int(m.group(1)), int(m.group(2)), int(m.group(3)))),
]


def parse_field(text):
    """Parse ``Q``, ``Q(sqrt,D)``, ``Q(i)``, ``Fp(P)`` or ``Fp2(P)``."""
    text = text.strip()
    for rx, build in _FIELD_RE:
        m = rx.fullmatch(text)
        if m:
            return build(m)
    raise ValueError(f"unknown field descriptor {text!r}")


def field_of(x):
    if isinstance(x, (QuadElement, FpElement, Fp2Element)):
        return x.K
    return QQ


# ---------------------------------------------------------------------------
# operations


def _check_same(K, *xs):
    for x in xs:
        fx = field_of(x)
        if fx != K and not (K == QQ and isinstance(x, int)):
            raise FieldMismatchError(f"{x} is in {fx}, expected {K}")


def arith(x, y, op):
    """Exact field arithmetic; ``op`` in add, sub, mul, div, neg, inv."""
    if op == "neg":
        return -x
    if op == "inv":
        if not x:
            raise ZeroDivisionError("inverse of 0")
        return 1 / x if field_of(x) != QQ else 1 / mpq(x)
    fx, fy = field_of(x), field_of(y)
    if fx != fy:
        raise FieldMismatchError(f"{fx} vs {fy}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if not y:
            raise ZeroDivisionError("division by 0")
        return x / y
    raise ValueError(f"unknown op {op!r}")


def is_square(K, x):
    _check_same(K, x)
    return K.is_square(x)


# positivity convention -----------------------------------------------------


def lex_positive(K, x):
    """Default sign convention: first nonzero coordinate decides."""
    return K.lex_positive(x)


def flipped_positive(K, x):
    """An alternative admissible convention: agrees with the default on +-1
    and is reversed everywhere else."""
    base = K.lex_positive(x)
    if x == 1 or x == -1:
        return base
    return not base


_positivity = contextvars.ContextVar("positivity", default=lex_positive)


@contextlib.contextmanager
def positivity_convention(pred):
    """Temporarily replace the sign convention used by :func:`positive`."""
    token = _positivity.set(pred)
    try:
        yield
    finally:
        _positivity.reset(token)


def positive(K, x):
    if not x:
        raise ValueError("positivity of 0")
    return _positivity.get()(K, x)


# stufe ----------------------------------------------------------------------


class Stufe(enum.Enum):
    ONE = 1
    TWO = 2
    UNKNOWN_GT2 = "unknown_gt2"
    INFINITE = "infinite"

    @property
    def at_most_two(self):
        return self in (Stufe.ONE, Stufe.TWO)


def _height_candidates(K, bound):
    """Elements (a + b*sqrt d)/c of K, in order of increasing height."""
    for h in range(1, bound + 1):
        for c in range(1, h + 1):
            for a in range(-h, h + 1):
                for b in range(-h, h + 1):
                    if max(abs(a), abs(b), c) != h:
                        continue
                    if math.gcd(math.gcd(a, b), c) != 1:
                        continue
                    yield QuadElement(mpq(a, c), mpq(b, c), K)


_TABLE_WITNESS = {
    -1: (("r", "0"), ("3/5*r", "4/5*r")),
    -2: (("r", "1"), ("r", "1")),
    -3: (("-1/2+1/2*r", "-1/2-1/2*r"), ("-1/2+1/2*r", "-1/2-1/2*r")),
}


@cache
def _witness(K, nonzero, bound):
    minus_one = K(-1)
    if K.is_finite:
        i = K.sqrt(minus_one)
        if i is not None and not nonzero:
            return i, K.zero
        for g in K.elements():
            d = K.sqrt(minus_one - g * g)
            if d is not None and (not nonzero or (g and d)):
                return g, d
        return None
    if K == QQ or K.d > 0:
        return None
    if K.d in _TABLE_WITNESS:
        g, d = (K.parse(s) for s in _TABLE_WITNESS[K.d][1 if nonzero else 0])
        if g * g + d * d != minus_one:
            raise AssertionError(f"table witness for {K} is wrong")
        return g, d
    for g in _height_candidates(K, bound):
        d = K.sqrt(minus_one - g * g)
        if d is not None and (not nonzero or (g and d)):
            return g, d
    return None


def two_square_witness(K, nonzero=False, bound=50):
    """A verified pair (g, d) with g^2 + d^2 = -1, or None.

    With ``nonzero`` set, only witnesses with g*d != 0 are returned.
    """
    w = _witness(K, nonzero, bound)
    if w is not None:
        g, d = w
        assert g * g + d * d == K(-1)
    return w


def stufe(K, bound=50):
    if K == QQ or (isinstance(K, QuadraticField) and K.d > 0):
        return Stufe.INFINITE
    if K.is_square(K(-1)):
        return Stufe.ONE
    if two_square_witness(K, bound=bound) is not None:
        return Stufe.TWO
    return Stufe.UNKNOWN_GT2


# inert primes and residue fields ---------------------------------------------


def _check_inert(K, p):
    if not isinstance(K, QuadraticField):
        raise ValueError("inert-prime machinery needs a quadratic field")  # noqa: TRY004
    if p < 3 or not gmpy2.is_prime(p) or (2 * K.d) % p == 0:
        raise ValueError(f"{p} must be an odd prime not dividing 2d")
    if gmpy2.legendre(K.d % p, p) != -1:
        raise ValueError(f"{p} is not inert in {K}")


def valuation_at_inert_prime(K, p, x):
    _check_inert(K, p)
    x = K(x)
    if not x:
        raise ValueError("valuation of 0")
    return _vq(x.norm(), p) // 2


@cache
def residue_field(K, p):
    """F_p[x]/(x^2 - d): the residue field of K at an inert odd prime p,
    with x the image of sqrt(d)."""
    _check_inert(K, p)
    return PrimeSquareField(p, 0, -K.d)


def reduce_at_inert_prime(K, p, x):
    x = K(x)
    if valuation_at_inert_prime(K, p, x) != 0:
        raise ValueError(f"{x} is not a unit at {p}")
    F = residue_field(K, p)
    return F(x.a) + F(x.b) * F.root


def mult_order(F, x):
    """Multiplicative order of a nonzero element of a finite field."""
    x = F(x)
    if not x:
        raise ValueError("order of 0")
    n = F.order - 1
    for q, e in factor_int(n):
        for _ in range(e):
            if x ** (n // q) == 1:
                n //= q
            else:
                break
    return n
