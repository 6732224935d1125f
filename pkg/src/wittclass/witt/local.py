"""Places of Q and Q(sqrt d), local square classes and Hilbert symbols.

Non-dyadic places use the tame symbol through the residue field. Dyadic
places of Q (and split dyadic places of a quadratic field) use the
closed-form 2-adic rule; the unramified and ramified dyadic places of a
quadratic field get a square-class table built by exact search (see
:class:`DyadicModel`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz
from sympy.ntheory import sqrt_mod

from ..fields import QQ, QuadElement, factor_int

__all__ = [
    "DyadicModel",
    "Place",
    "class_symbol",
    "dyadic_closed_form",
    "dyadic_search",
    "hilbert_symbol",
    "hilbert_symbol_local",
    "infinite_places",
    "local_aniso_dim",
    "local_witt_zero",
    "places_over",
    "relevant_places",
    "square_class",
    "uniformizer",
    "valuation",
]


def _v2(n):
    return int(gmpy2.remove(mpz(n), 2)[1]) if n else None


def _vp_int(n, p):
    return int(gmpy2.remove(mpz(n), p)[1])


def _vp_rat(x, p):
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def _legendre_unit_rat(x, p):
    """Legendre symbol of a p-adic unit rational."""
    return int(gmpy2.legendre(int(x.numerator * x.denominator) % p, p))


@dataclass(frozen=True)
class Place:
    """A place of Q or of a quadratic field.

    ``kind`` is one of ``rational`` (a prime of Q), ``split``, ``inert``,
    ``ramified``, ``real`` or ``complex``; ``sign`` picks the root of d
    (split places) or the embedding (real places).
    """

    field: object
    p: int | None
    kind: str
    sign: int = 1

    @property
    def is_infinite(self):
        return self.p is None

    @property
    def is_dyadic(self):
        return self.p == 2

    @property
    def residue_order(self):
        if self.p is None:
            raise ValueError("infinite place")
        return self.p * self.p if self.kind == "inert" else self.p

    def __str__(self):
        if self.p is None:
            return self.kind if self.kind == "complex" else f"real{'' if self.sign > 0 else '-'}"
        if self.kind == "split":
            return f"{self.p}{'+' if self.sign > 0 else '-'}"
        return f"{self.p}" if self.kind == "rational" else f"{self.p}({self.kind})"


def places_over(K, p):
    p = int(p)
    if K == QQ:
        return [Place(QQ, p, "rational")]
    d = K.d
    if p == 2:
        if d % 8 == 1:
            return [Place(K, 2, "split", 1), Place(K, 2, "split", -1)]
        if d % 8 == 5:
            return [Place(K, 2, "inert")]
        return [Place(K, 2, "ramified")]
    if d % p == 0:
        return [Place(K, p, "ramified")]
    if gmpy2.legendre(d % p, p) == 1:
        return [Place(K, p, "split", 1), Place(K, p, "split", -1)]
    return [Place(K, p, "inert")]


def infinite_places(K):
    if K == QQ:
        return [Place(QQ, None, "real")]
    if K.d > 0:
        return [Place(K, None, "real", 1), Place(K, None, "real", -1)]
    return [Place(K, None, "complex")]


def _primes_of(x):
    if isinstance(x, QuadElement):
        n = x.norm()
    else:
        n = mpq(x)
    out = set()
    for part in (n.numerator, n.denominator):
        out.update(q for q, _ in factor_int(part))
    return out


def relevant_places(K, elements):
    """Finite places at which some element is not a unit, plus all dyadic
    places. Outside this set every Hilbert symbol of the elements is 1."""
    primes = {2}
    for x in elements:
        primes |= _primes_of(x)
    out = []
    for p in sorted(primes):
        out.extend(places_over(K, p))
    return out


# ---------------------------------------------------------------------------
# p-adic square roots for split places


@cache
def _padic_sqrt(d, p, prec):
    """r with r^2 = d mod p^prec (r is an approximation to a p-adic root)."""
    if p == 2:
        # d = 1 mod 8; lift bit by bit, keeping two spare bits
        r = 1
        for k in range(3, prec + 3):
            if (r * r - d) % (1 << (k + 1)):
                r += 1 << (k - 1)
        return r % (1 << prec)
    r = sqrt_mod(d % p, p)
    mod = p
    while mod < p ** prec:
        mod = min(mod * mod, p ** prec)
        r = (r - (r * r - d) * pow(2 * r, -1, mod)) % mod
    return r


def _split_parts(place, x):
    """(valuation, unit residue mod p^extra) of x at a split place."""
    K = place.field
    p = place.p
    A = x.a * x.b.denominator * x.a.denominator
    B = x.b * x.b.denominator * x.a.denominator
    D = x.a.denominator * x.b.denominator
    A, B = int(A), int(B)
    n0 = _vp_int(A * A - K.d * B * B, p)
    extra = 3 if p == 2 else 1
    prec = n0 + extra + 1
    r = _padic_sqrt(K.d, p, prec) * place.sign
    mod = p ** prec
    y = (A + B * r) % mod
    val = _vp_int(y, p)
    if val > n0:
        raise AssertionError("split valuation exceeded norm valuation")
    vd = _vp_int(D, p)
    Dp = D // p ** vd
    m = p ** extra
    unit = (y // p ** val) * pow(Dp, -1, m) % m
    return val - vd, unit


# ---------------------------------------------------------------------------
# valuations and uniformizers


def valuation(place, x):
    if not x:
        raise ValueError("valuation of 0")
    K, p, kind = place.field, place.p, place.kind
    if p is None:
        raise ValueError("infinite place has no valuation")
    if kind == "rational":
        return _vp_rat(mpq(x), p)
    x = K(x)
    if kind == "inert":
        return _vp_rat(x.norm(), p) // 2
    if kind == "ramified":
        return _vp_rat(x.norm(), p)
    return _split_parts(place, x)[0]


def uniformizer(place):
    K, p = place.field, place.p
    if place.kind in ("rational", "split", "inert"):
        return K(p) if K != QQ else mpq(p)
    if p == 2 and K.d % 4 == 3:
        return K(1) + K.gen
    return K.gen


def _unit_part(place, x, v):
    if v == 0:
        return x
    return x / uniformizer(place) ** v


def _residue_char(place, u):
    """Quadratic character of the residue of a unit u at an odd place."""
    p, kind = place.p, place.kind
    if kind == "rational":
        return _legendre_unit_rat(mpq(u), p)
    if kind == "inert":
        return _legendre_unit_rat(u.norm(), p)
    if kind == "ramified":
        return _legendre_unit_rat(u.a, p)
    _, unit = _split_parts(place, u)
    return int(gmpy2.legendre(unit % p, p))


# ---------------------------------------------------------------------------
# dyadic places


class DyadicModel:
    """Square classes and Hilbert symbols at a dyadic place.

    Units are handled through their residues modulo 8 in the basis
    {1, theta}; a unit is a square iff it is a square mod 8 (since 8 lies
    in 4*pi*O). The Hilbert symbol table is built from exact norm values
    x^2 - a*y^2: these generate the norm group of K_v(sqrt a), which is
    known to have index 2, so the search stops as soon as it has found
    a subgroup of that size.
    """

    def __init__(self, place):
        self.place = place
        K = place.field
        if K == QQ or place.kind == "split":
            self.kind = "Q2"
            self.t1, self.t0 = 0, 0
        elif place.kind == "inert":
            self.kind = "inert"
            self.t1, self.t0 = 1, (K.d - 1) // 4
        else:
            self.kind = "ramified"
            self.t1, self.t0 = 0, K.d
        self._build_unit_classes()
        self._table = None

    # residues mod 8 ----------------------------------------------------
    def _mul(self, x, y):
        c0, c1 = x
        e0, e1 = y
        hi = c1 * e1
        return ((c0 * e0 + self.t0 * hi) % 8, (c0 * e1 + c1 * e0 + self.t1 * hi) % 8)

    def _residues(self):
        if self.kind == "Q2":
            return [(c, 0) for c in range(8)]
        return [(a, b) for a in range(8) for b in range(8)]

    def _is_unit_residue(self, r):
        c0, c1 = r
        return (c0 * c0 + self.t1 * c0 * c1 - self.t0 * c1 * c1) % 2 == 1

    def _build_unit_classes(self):
        units = [r for r in self._residues() if self._is_unit_residue(r)]
        squares = {self._mul(w, w) for w in units}
        cls = {}
        reps = []
        for u in units:
            if u in cls:
                continue
            coset = {self._mul(u, s) for s in squares}
            cid = len(reps)
            reps.append(min(coset))
            for c in coset:
                cls[c] = cid
        self.unit_class = cls
        self.unit_reps = reps
        expected = 4 if self.kind == "Q2" else 8
        if len(reps) != expected:
            raise AssertionError(f"unit square classes: {len(reps)} != {expected}")
        self.n_classes = 2 * len(reps)
        self.one = (0, cls[(1, 0)])

    def _theta(self):
        K = self.place.field
        if self.kind == "inert":
            return (K(1) + K.gen) / 2
        return K.gen

    def val_unit(self, x):
        """(valuation, unit residue mod 8) of x."""
        place = self.place
        K = place.field
        if K == QQ:
            x = mpq(x)
            v = _vp_rat(x, 2)
            u = x / mpq(2) ** v
            return v, (int(u.numerator) * pow(int(u.denominator), -1, 8) % 8, 0)
        if place.kind == "split":
            v, unit = _split_parts(place, x)
            return v, (unit % 8, 0)
        if self.kind == "inert":
            den = x.a.denominator * x.b.denominator
            A, B = int(x.a * den), int(x.b * den)
            c0, c1 = A - B, 2 * B
            m = min(k for k in (_v2(c0), _v2(c1)) if k is not None)
            vd = _v2(den)
            odd = int(den) >> vd
            inv = pow(odd, -1, 8)
            return m - vd, ((c0 >> m) * inv % 8, (c1 >> m) * inv % 8)
        v = _vp_rat(x.norm(), 2)
        u = _unit_part(place, x, v)
        a, b = u.a, u.b
        if a.denominator % 2 == 0 or b.denominator % 2 == 0:
            raise AssertionError("dyadic unit with non-integral coordinates")
        a = int(a.numerator) * pow(int(a.denominator), -1, 8) % 8
        b = int(b.numerator) * pow(int(b.denominator), -1, 8) % 8
        return v, (a, b)

    def class_of(self, x):
        v, r = self.val_unit(x)
        return (v & 1, self.unit_class[r])

    def class_mul(self, c1, c2):
        r = self._mul(self.unit_reps[c1[1]], self.unit_reps[c2[1]])
        return ((c1[0] + c2[0]) & 1, self.unit_class[r])

    def class_rep(self, c):
        K = self.place.field
        c0, c1 = self.unit_reps[c[1]]
        if K == QQ:
            u = mpq(c0)
        else:
            u = K(c0) + K(c1) * self._theta()
        return u * uniformizer(self.place) if c[0] else u

    def all_classes(self):
        return [(v, i) for v in (0, 1) for i in range(len(self.unit_reps))]

    def _norm_group(self, a):
        """Square classes of the norms x^2 - a*y^2 (a subgroup of index 2)."""
        K = self.place.field
        target = self.n_classes // 2
        group = {self.one}
        theta = None if self.kind == "Q2" else self._theta()
        for box in (8, 16, 32):
            if self.kind == "Q2":
                elems = [mpq(c) if K == QQ else K(c) for c in range(box)]
            else:
                elems = [K(c0) + K(c1) * theta for c0 in range(box) for c1 in range(box)]
            for x in elems:
                x2 = x * x
                for y in elems:
                    z = x2 - a * y * y
                    if not z:
                        continue
                    c = self.class_of(z)
                    if c not in group:
                        group |= {self.class_mul(c, h) for h in group}
                        if len(group) == target:
                            return frozenset(group)
                    if len(group) > target:
                        raise AssertionError("norm group larger than index 2")
        raise AssertionError("norm group search did not reach index 2")

    def table(self):
        if self._table is None:
            tab = {}
            classes = self.all_classes()
            for ca in classes:
                a = self.class_rep(ca)
                if ca == self.one:
                    for cb in classes:
                        tab[ca, cb] = 1
                    continue
                ng = self._norm_group(a)
                for cb in classes:
                    tab[ca, cb] = 1 if cb in ng else -1
            self._table = tab
        return self._table

    def symbol(self, c1, c2):
        if self.kind == "Q2":
            return _q2_symbol_classes(self, c1, c2)
        return self.table()[c1, c2]


def _q2_symbol_classes(model, c1, c2):
    u = model.unit_reps[c1[1]][0]
    w = model.unit_reps[c2[1]][0]
    return dyadic_closed_form(u * (2 if c1[0] else 1), w * (2 if c2[0] else 1))


_DYADIC = {}


def dyadic_model(place):
    key = (place.field, place.p, place.kind, place.sign)
    m = _DYADIC.get(key)
    if m is None:
        m = _DYADIC[key] = DyadicModel(place)
    return m


# ---------------------------------------------------------------------------
# 2-adic symbol over Q


def dyadic_closed_form(a, b):
    """(a, b)_2 for nonzero rationals by the parity formula."""
    a, b = mpq(a), mpq(b)
    al = _vp_rat(a, 2)
    be = _vp_rat(b, 2)
    ua = a / mpq(2) ** al
    ub = b / mpq(2) ** be
    u = int(ua.numerator) * int(ua.denominator) % 8
    v = int(ub.numerator) * int(ub.denominator) % 8
    eps_u = ((u - 1) // 2) & 1
    eps_v = ((v - 1) // 2) & 1
    om_u = ((u * u - 1) // 8) & 1
    om_v = ((v * v - 1) // 8) & 1
    e = eps_u * eps_v + al * om_v + be * om_u
    return -1 if e & 1 else 1


_SQ256 = None


def dyadic_search(a, b, bits=8):
    """(a, b)_2 by looking for a primitive zero of a x^2 + b y^2 - z^2
    modulo 2^bits after normalising a, b to valuation 0 or 1.

    Any such zero lifts to Z_2 once bits >= 5 (Hensel), so bits = 8 decides
    the symbol exactly."""
    global _SQ256
    a, b = mpq(a), mpq(b)
    mod = 1 << bits

    def normal(x):
        v = _vp_rat(x, 2)
        u = x / mpq(2) ** v
        u = int(u.numerator) * int(u.denominator)  # same square class
        return (u << (v & 1)) % mod

    an, bn = normal(a), normal(b)
    if _SQ256 is None or _SQ256[0] != mod:
        z = np.arange(mod, dtype=np.int64)
        any_sq = np.zeros(mod, dtype=bool)
        odd_sq = np.zeros(mod, dtype=bool)
        any_sq[(z * z) % mod] = True
        odd_sq[(z[1::2] * z[1::2]) % mod] = True
        _SQ256 = (mod, any_sq, odd_sq)
    _, any_sq, odd_sq = _SQ256
    x = np.arange(mod, dtype=np.int64)
    sq = (x * x) % mod
    r = (an * sq[:, None] + bn * sq[None, :]) % mod
    some_odd = ((x[:, None] | x[None, :]) & 1).astype(bool)
    ok = np.where(some_odd, any_sq[r], odd_sq[r])
    return 1 if ok.any() else -1


# ---------------------------------------------------------------------------
# classes and symbols at arbitrary places


def square_class(place, x):
    """A hashable local square-class key of a nonzero element."""
    if not x:
        raise ValueError("square class of 0")
    K = place.field
    x = K(x)
    if place.p is None:
        if place.kind == "complex":
            return 0
        if K == QQ:
            return 1 if x > 0 else -1
        return K.real_sign(x, place.sign)
    if place.is_dyadic:
        return dyadic_model(place).class_of(x)
    v = valuation(place, x)
    u = _unit_part(place, x, v)
    return (v & 1, _residue_char(place, u))


def class_symbol(place, c1, c2):
    """Hilbert symbol on square-class keys produced by :func:`square_class`."""
    if place.p is None:
        if place.kind == "complex":
            return 1
        return -1 if (c1 < 0 and c2 < 0) else 1
    if place.is_dyadic:
        return dyadic_model(place).symbol(c1, c2)
    a1, u1 = c1
    a2, u2 = c2
    q = place.residue_order
    s = -1 if (a1 * a2 * ((q - 1) // 2)) & 1 else 1
    if a2:
        s *= u1
    if a1:
        s *= u2
    return s


def _class_mul(place, c1, c2):
    if place.p is None:
        return c1 * c2 if place.kind == "real" else 0
    if place.is_dyadic:
        return dyadic_model(place).class_mul(c1, c2)
    return ((c1[0] + c2[0]) & 1, c1[1] * c2[1])


def _class_one(place):
    if place.p is None:
        return 1 if place.kind == "real" else 0
    if place.is_dyadic:
        return dyadic_model(place).one
    return (0, 1)


def hilbert_symbol(a, b, place):
    """Hilbert symbol (a, b) over Q at a prime p or at ``"inf"``."""
    a, b = mpq(a), mpq(b)
    if not a or not b:
        raise ValueError("Hilbert symbol of 0")
    if place in ("inf", "oo", None, float("inf")):
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    if p < 2 or not gmpy2.is_prime(p):
        raise ValueError(f"invalid place {place!r}")
    if p == 2:
        return dyadic_closed_form(a, b)
    pl = Place(QQ, p, "rational")
    return class_symbol(pl, square_class(pl, a), square_class(pl, b))


def hilbert_symbol_local(K, a, b, place):
    """Hilbert symbol (a, b) in the completion of K at ``place``."""
    if not isinstance(place, Place) or place.field != K:
        raise ValueError(f"unsupported place description {place!r}")
    a, b = K(a), K(b)
    if not a or not b:
        raise ValueError("Hilbert symbol of 0")
    return class_symbol(place, square_class(place, a), square_class(place, b))


# ---------------------------------------------------------------------------
# local Witt classes


def _invariants(place, classes):
    """(det class, Hasse invariant) of a diagonal form given by classes."""
    det = _class_one(place)
    hasse = 1
    for c in classes:
        hasse *= class_symbol(place, det, c)
        det = _class_mul(place, det, c)
    return det, hasse


def _residue_forms(place, entries):
    """Springer residue data at a non-dyadic place: for each parity of the
    valuation, (dimension, product of residue characters)."""
    dims = [0, 0]
    chars = [1, 1]
    for x in entries:
        par, ch = square_class(place, x)
        dims[par] += 1
        chars[par] *= ch
    return dims, chars


def _finite_field_zero(q, n, char_prod):
    if n % 2:
        return False
    minus_one = -1 if ((q - 1) // 2) & 1 else 1
    sign = minus_one if (n * (n - 1) // 2) & 1 else 1
    return sign * char_prod == 1


def _finite_field_aniso(q, n, char_prod):
    if n % 2:
        return 1
    return 0 if _finite_field_zero(q, n, char_prod) else 2


def local_witt_zero(place, entries):
    """Is the diagonal form with these entries hyperbolic over K_v?"""
    n = len(entries)
    if n % 2:
        return False
    if place.p is None:
        if place.kind == "complex":
            return True
        return sum(square_class(place, x) for x in entries) == 0
    if not place.is_dyadic:
        q = place.residue_order
        dims, chars = _residue_forms(place, entries)
        return all(_finite_field_zero(q, dims[i], chars[i]) for i in (0, 1))
    classes = [square_class(place, x) for x in entries]
    det, hasse = _invariants(place, classes)
    m = n // 2
    signed = det if m % 2 == 0 else _class_mul(place, det, square_class(place, -1))
    if signed != _class_one(place):
        return False
    c = square_class(place, -1)
    target = class_symbol(place, c, c) if (m * (m - 1) // 2) % 2 else 1
    return hasse == target


def local_aniso_dim(place, entries):
    """Dimension of the anisotropic part of the form over K_v."""
    n = len(entries)
    if place.p is None:
        if place.kind == "complex":
            return n % 2
        return abs(sum(square_class(place, x) for x in entries))
    if not place.is_dyadic:
        q = place.residue_order
        dims, chars = _residue_forms(place, entries)
        return sum(_finite_field_aniso(q, dims[i], chars[i]) for i in (0, 1))
    classes = [square_class(place, x) for x in entries]
    det, hasse = _invariants(place, classes)
    neg1 = square_class(place, -1)
    one = _class_one(place)

    def sym(x, y):
        return class_symbol(place, x, y)

    while n > 0:
        minus_det = _class_mul(place, det, neg1)
        if n == 1:
            iso = False
        elif n == 2:
            iso = minus_det == one
        elif n == 3:
            iso = hasse == sym(neg1, minus_det)
        elif n == 4:
            iso = det != one or hasse == sym(neg1, neg1)
        else:
            iso = True
        if not iso:
            break
        hasse *= sym(neg1, minus_det)
        det = minus_det
        n -= 2
    return n
