"""Witt-ring elements as formal sums of rank-one forms."""

from __future__ import annotations

import re
from dataclasses import dataclass

from gmpy2 import mpq

from ..fields import (
    QQ,
    FieldMismatchError,
    QuadElement,
    QuadraticField,
    squarefree_part,
)

__all__ = [
    "Membership",
    "WittExpression",
    "canonical_coefficient",
    "ideal_membership",
    "parse_form",
    "pfister2",
    "signature",
    "signed_determinant",
]


def _rat_key(x):
    x = mpq(x)
    return mpq(squarefree_part(int(x.numerator * x.denominator)))


def canonical_coefficient(K, x):
    """A representative of the square class of x.

    Over Q and finite fields the representative is canonical (squarefree
    integer, or 1 / a fixed non-square). Over quadratic fields only
    rational elements are normalised; equality of classes must then be
    decided with ``is_square`` on ratios.
    """
    if not x:
        raise ValueError("zero coefficient")
    if K == QQ:
        return _rat_key(x)
    if K.is_finite:
        x = K(x)
        return K.one if K.is_square(x) else K.nonsquare
    x = K(x)
    if x.b == 0:
        return K(_rat_key(x.a))
    return x


def _same_class(K, x, y):
    if K == QQ or K.is_finite:
        return x == y
    # norm ratio must be a rational square before anything else
    n = x.norm() / y.norm()
    if not QQ.is_square(n):
        return False
    return K.is_square(x / y)


class WittExpression:
    """Sum of multiplicity * <coefficient> in the Witt ring of a field.

    Coefficients in the same square class are merged on construction.
    ``==`` compares normalised terms; use :func:`witt_equal` for equality
    of Witt classes.
    """

    __slots__ = ("_terms", "field")

    def __init__(self, field, terms=()):
        self.field = field
        merged = []  # list of [coef, mult]
        for c, m in terms:
            m = int(m)
            if m == 0:
                continue
            c = field(c)
            if not c:
                # <0> is read as 0
                continue
            key = canonical_coefficient(field, c)
            for slot in merged:
                if _same_class(field, slot[0], key):
                    slot[1] += m
                    break
            else:
                merged.append([key, m])
        self._terms = tuple((c, m) for c, m in merged if m)

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def form(cls, field, entries):
        """The diagonal form <entries[0], entries[1], ...>."""
        return cls(field, [(e, 1) for e in entries])

    @classmethod
    def rank_one(cls, field, a, mult=1):
        return cls(field, [(a, mult)])

    # access ---------------------------------------------------------------
    @property
    def terms(self):
        return self._terms

    @property
    def dim(self):
        """Virtual dimension (sum of multiplicities)."""
        return sum(m for _, m in self._terms)

    @property
    def is_honest(self):
        return all(m > 0 for _, m in self._terms)

    def entries(self):
        """Diagonal entries of an honest form in the same Witt class,
        using -<a> = <-a>."""
        out = []
        for c, m in self._terms:
            if m > 0:
                out.extend([c] * m)
            else:
                out.extend([-c] * (-m))
        return out

    def folded(self):
        return WittExpression.form(self.field, self.entries())

    def is_structurally_zero(self):
        return not self._terms

    # arithmetic -----------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, WittExpression):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        other = self._check(other)
        if other is NotImplemented:
            return other
        return WittExpression(self.field, self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return WittExpression(self.field, [(c, -m) for c, m in self._terms])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return WittExpression(self.field, [(c, m * other) for c, m in self._terms])
        other = self._check(other)
        if other is NotImplemented:
            return other
        return WittExpression(
            self.field,
            [(c1 * c2, m1 * m2) for c1, m1 in self._terms for c2, m2 in other._terms],
        )

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, WittExpression) or other.field != self.field:
            return False
        if len(self._terms) != len(other._terms):
            return False
        rest = list(other._terms)
        for c, m in self._terms:
            for i, (c2, m2) in enumerate(rest):
                if m == m2 and _same_class(self.field, c, c2):
                    del rest[i]
                    break
            else:
                return False
        return True

    def __hash__(self):
        return hash((self.field, self.dim, len(self._terms)))

    def __str__(self):
        if not self._terms:
            return "0"
        fmt = self.field.format
        pos = [fmt(c) for c, m in self._terms for _ in range(m) if m > 0]
        neg = [fmt(c) for c, m in self._terms for _ in range(-m) if m < 0]
        out = f"<{','.join(pos)}>" if pos else ""
        if neg:
            out = (out + " - " if out else "-") + f"<{','.join(neg)}>"
        return out

    def __repr__(self):
        return f"WittExpression({self.field}, {self})"

    def to_json(self):
        return {"field": str(self.field), "form": str(self)}


_FORM_RE = re.compile(r"\s*([+-]?)\s*(\d*)\s*<([^<>]*)>\s*")


def parse_form(field, text):
    """Parse ``<1,-2,-3,6>``, ``0`` or signed sums such as ``<1,1> - 2<3>``."""
    s = text.strip()
    if s == "0":
        return WittExpression(field)
    pos = 0
    terms = []
    while pos < len(s):
        m = _FORM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad form literal at position {pos}: {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        if terms and not m.group(1):
            raise ValueError(f"missing '+' or '-' at position {m.start()}: {text!r}")
        mult = int(m.group(2)) if m.group(2) else 1
        body = m.group(3).strip()
        if body:
            offset = m.start(3)
            for part in body.split(","):
                try:
                    terms.append((field.parse(part), sign * mult))
                except ValueError as exc:
                    raise ValueError(f"bad element at position {offset}: {exc}") from None
                offset += len(part) + 1
        pos = m.end()
    for c, _ in terms:
        if not c:
            raise ValueError(f"zero entry in form literal {text!r}")
    return WittExpression(field, terms)


def pfister2(s, t, field=None):
    """The 2-fold Pfister form <1, -s, -t, st>."""
    K = field if field is not None else _field_guess(s, t)
    s, t = K(s), K(t)
    if not s or not t:
        raise ValueError("Pfister form of a zero argument")
    return WittExpression.form(K, [K.one, -s, -t, s * t])


def _field_guess(*xs):
    for x in xs:
        if isinstance(x, QuadElement):
            return x.K
        K = getattr(x, "K", None)
        if K is not None:
            return K
    return QQ


def signed_determinant(q):
    """(-1)^(n(n-1)/2) * det of an honest form, as a square-class representative."""
    if not q.is_honest:
        raise ValueError("signed determinant needs nonnegative multiplicities")
    K = q.field
    det = K.one
    n = 0
    for c, m in q.terms:
        det = det * c ** m
        n += m
    if (n * (n - 1) // 2) % 2:
        det = -det
    return canonical_coefficient(K, det)


def _class_signed_det(q):
    return signed_determinant(q if q.is_honest else q.folded())


@dataclass(frozen=True)
class Membership:
    in_I: bool
    in_I2: bool
    in_I2_plus: bool

    def as_dict(self):
        return {"in_I": self.in_I, "in_I2": self.in_I2, "in_I2_plus": self.in_I2_plus}


def ideal_membership(q):
    """Membership of the Witt class of q in I, I^2 and I^2_+ (the subgroup
    generated by I^2 and <1,1>)."""
    K = q.field
    if q.dim % 2:
        return Membership(False, False, False)
    d = _class_signed_det(q)
    in2 = K.is_square(d)
    plus = in2 or K.is_square(-d)
    return Membership(True, in2, plus)


def signature(q, embedding=1):
    """Signature at a real place (Q, or a real quadratic field with the
    embedding sqrt(d) -> embedding*sqrt(d))."""
    K = q.field
    if K == QQ:
        return sum(m * (1 if c > 0 else -1) for c, m in q.terms)
    if isinstance(K, QuadraticField) and K.d > 0:
        return sum(m * K.real_sign(c, embedding) for c, m in q.terms)
    raise ValueError(f"{K} has no real place")
