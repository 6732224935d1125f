"""Exact 2x2 matrices over the supported fields, SL2 and PSL2 helpers."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .fields import QQ, FieldMismatchError, positive, stufe, two_square_witness

__all__ = [
    "G1",
    "G2",
    "AntiCommutingParams",
    "Commutation",
    "Mat2",
    "ProjMat",
    "anticommuting_from_params",
    "bruhat_compose",
    "bruhat_decompose",
    "build_anticommuting_pair",
    "commutation_type",
    "g1",
    "g2",
    "h_elem",
    "identity",
    "matrix_from_json",
    "normalize_anticommuting_pair",
    "psl_canonicalize",
    "random_sl2",
    "sigma",
    "w_elem",
    "x_elem",
    "y_elem",
]


class Mat2:
    """Immutable 2x2 matrix ((a11, a12), (a21, a22)) over a field."""

    __slots__ = ("a11", "a12", "a21", "a22", "field")

    def __init__(self, field, a11, a12, a21, a22):
        self.field = field
        self.a11 = field(a11)
        self.a12 = field(a12)
        self.a21 = field(a21)
        self.a22 = field(a22)

    @classmethod
    def _raw(cls, field, a11, a12, a21, a22):
        m = object.__new__(cls)
        m.field = field
        m.a11, m.a12, m.a21, m.a22 = a11, a12, a21, a22
        return m

    @property
    def entries(self):
        return ((self.a11, self.a12), (self.a21, self.a22))

    def flat(self):
        return (self.a11, self.a12, self.a21, self.a22)

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self):
        return self.a11 + self.a22

    def is_sl2(self):
        return self.det() == 1

    def _same(self, other):
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __mul__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        self._same(o)
        return Mat2._raw(
            self.field,
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )

    def __neg__(self):
        return Mat2._raw(self.field, -self.a11, -self.a12, -self.a21, -self.a22)

    def __add__(self, o):
        self._same(o)
        return Mat2._raw(self.field, self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)

    def scale(self, c):
        c = self.field(c)
        return Mat2._raw(self.field, c * self.a11, c * self.a12, c * self.a21, c * self.a22)

    def inverse(self):
        d = self.det()
        if not d:
            raise ZeroDivisionError("singular matrix")
        if d == 1:
            return Mat2._raw(self.field, self.a22, -self.a12, -self.a21, self.a11)
        return Mat2._raw(self.field, self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = identity(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, o):
        return isinstance(o, Mat2) and o.field == self.field and self.flat() == o.flat()

    def __hash__(self):
        return hash(self.flat())

    def is_identity(self):
        return self.a11 == 1 and self.a22 == 1 and not self.a12 and not self.a21

    def is_minus_identity(self):
        return self.a11 == -1 and self.a22 == -1 and not self.a12 and not self.a21

    def is_scalar_pm1(self):
        return self.is_identity() or self.is_minus_identity()

    def __repr__(self):
        f = self.field.format
        return f"[[{f(self.a11)}, {f(self.a12)}], [{f(self.a21)}, {f(self.a22)}]]"

    def to_json(self):
        f = self.field.format
        return {"field": str(self.field), "entries": [[f(self.a11), f(self.a12)], [f(self.a21), f(self.a22)]]}


def matrix_from_json(obj, field=None):
    """Accepts {"field": ..., "entries": [[a, b], [c, d]]} or a bare
    [[a, b], [c, d]] when the field is given."""
    from .fields import parse_field

    if isinstance(obj, list):
        if field is None:
            raise ValueError("a bare matrix needs a field")
        obj = {"entries": obj}
    K = field if field is not None else parse_field(obj["field"])
    (a, b), (c, d) = obj["entries"]
    vals = [K.parse(str(v)) if isinstance(v, str) else K(v) for v in (a, b, c, d)]
    return Mat2(K, *vals)


def identity(K):
    return Mat2(K, 1, 0, 0, 1)


def x_elem(K, u):
    return Mat2(K, 1, u, 0, 1)


def y_elem(K, v):
    return Mat2(K, 1, 0, v, 1)


def h_elem(K, t):
    t = K(t)
    return Mat2(K, t, 0, 0, 1 / t)


def w_elem(K, t):
    t = K(t)
    return Mat2(K, 0, t, -1 / t, 0)


# ---------------------------------------------------------------------------
# Bruhat normal forms


@dataclass(frozen=True)
class G1:
    """x(u) h(t)."""

    u: object
    t: object


@dataclass(frozen=True)
class G2:
    """x(u) w(t) x(v)."""

    u: object
    t: object
    v: object


def g1(K, u, t):
    u, t = K(u), K(t)
    if not t:
        raise ValueError("t must be nonzero")
    return Mat2._raw(K, t, u / t, K.zero, 1 / t)


def g2(K, u, t, v):
    u, t, v = K(u), K(t), K(v)
    if not t:
        raise ValueError("t must be nonzero")
    return Mat2._raw(K, -u / t, t - u * v / t, -1 / t, -v / t)


def bruhat_decompose(A):
    if not A.is_sl2():
        raise ValueError("matrix is not in SL2")
    if not A.a21:
        return G1(A.a11 * A.a12, A.a11)
    c = A.a21
    return G2(A.a11 / c, -1 / c, A.a22 / c)


def bruhat_compose(K, f):
    if isinstance(f, G1):
        return g1(K, f.u, f.t)
    return g2(K, f.u, f.t, f.v)


# ---------------------------------------------------------------------------
# commutation, sign section, PSL2


class Commutation(enum.Enum):
    COMMUTE = "commute"
    ANTICOMMUTE = "anticommute"
    NEITHER = "neither"


def commutation_type(A, B):
    ab, ba = A * B, B * A
    if ab == ba:
        return Commutation.COMMUTE
    if ab == -ba:
        return Commutation.ANTICOMMUTE
    return Commutation.NEITHER


def sigma(A):
    """+1 iff the first nonzero entry (row-major) is positive."""
    for x in A.flat():
        if x:
            return 1 if positive(A.field, x) else -1
    raise ValueError("zero matrix")


class ProjMat:
    """An element +-A of PSL2, stored through its sigma-positive lift.

    The lift is fixed when the object is created, i.e. under the sign
    convention in force at that moment."""

    __slots__ = ("rep",)

    def __init__(self, A):
        self.rep = A if sigma(A) == 1 else -A

    @property
    def field(self):
        return self.rep.field

    def __mul__(self, o):
        return ProjMat(self.rep * o.rep)

    def inverse(self):
        return ProjMat(self.rep.inverse())

    def __eq__(self, o):
        if not isinstance(o, ProjMat):
            return False
        return self.rep == o.rep or self.rep == -o.rep

    def __hash__(self):
        return hash(frozenset((self.rep.flat(), (-self.rep).flat())))

    def is_identity(self):
        return self.rep.is_scalar_pm1()

    def __repr__(self):
        return f"+-{self.rep!r}"

    def to_json(self):
        return self.rep.to_json()


def psl_canonicalize(A):
    if not A.is_sl2():
        raise ValueError("matrix is not in SL2")
    return ProjMat(A)


# ---------------------------------------------------------------------------
# anti-commuting pairs


@dataclass(frozen=True)
class AntiCommutingParams:
    gamma: object
    delta: object
    t: object

    def __post_init__(self):
        g, d, t = self.gamma, self.delta, self.t
        if not t:
            raise ValueError("t must be nonzero")
        if g * g + (t * d) * (t * d) != -1:
            raise ValueError("gamma^2 + (t delta)^2 != -1")

    @property
    def eta(self):
        return self.gamma * self.delta


def anticommuting_from_params(K, params):
    g, d, t = params.gamma, params.delta, params.t
    a = Mat2(K, g, t * t * d, d, -g)
    b = w_elem(K, t)
    return a, b


def build_anticommuting_pair(K, eta):
    """(a, b, params) with a b = -b a, b = w(t) and gamma*delta = eta."""
    if K == QQ or not stufe(K).at_most_two:
        raise ValueError(f"{K} has stufe > 2 or unknown: no anti-commuting pairs")
    eta = K(eta)
    if not eta:
        raise ValueError("eta must be nonzero")
    w = two_square_witness(K, nonzero=True)
    if w is None:
        raise ValueError(f"{K}: no witness -1 = g^2 + d^2 with g*d != 0")
    g0, d0 = w
    s = eta / (g0 * d0)
    params = AntiCommutingParams(g0, d0 * s, 1 / s)
    a, b = anticommuting_from_params(K, params)
    if not (a.is_sl2() and b.is_sl2() and a * b == -(b * a)):
        raise AssertionError("constructed pair does not anti-commute")
    return a, b, params


def normalize_anticommuting_pair(a, b):
    """(d, params) with d b d^-1 = w(t) and d a d^-1 in the normal shape."""
    if commutation_type(a, b) is not Commutation.ANTICOMMUTE:
        raise ValueError("pair does not anti-commute")
    K = a.field
    for e in ((K.one, K.zero), (K.zero, K.one), (K.one, K.one)):
        be = (b.a11 * e[0] + b.a12 * e[1], b.a21 * e[0] + b.a22 * e[1])
        D = e[0] * be[1] - e[1] * be[0]
        if D:
            break
    else:  # pragma: no cover - b has no cyclic vector only if b is scalar
        raise ValueError("b is scalar")
    P = Mat2(K, e[0], be[0] / D, e[1], be[1] / D)
    d = P.inverse()
    t = -1 / D
    a2 = d * a * P
    b2 = d * b * P
    params = AntiCommutingParams(a2.a11, a2.a21, t)
    ra, rb = anticommuting_from_params(K, params)
    if ra != a2 or rb != b2:
        raise AssertionError("normalisation failed to reach the normal shape")
    return d, params


# ---------------------------------------------------------------------------
# sampling


def random_sl2(K, rng, height=5, factors=3):
    """A product of random x(u), y(v), h(t) with small entries."""
    A = identity(K)
    for _ in range(factors):
        kind = rng.randrange(3)
        if kind == 2:
            A = A * h_elem(K, K.random_element(rng, height, nonzero=True))
        else:
            u = K.random_element(rng, height)
            A = A * (x_elem(K, u) if kind == 0 else y_elem(K, u))
    return A
