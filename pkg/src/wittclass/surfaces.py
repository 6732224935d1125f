"""Central extensions defined by the cocycles, and evaluation of their
classes on surface-group representations."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cocycles import CocycleKind, commuting_pair, evaluate, hyperbolic_plane
from .fields import QQ, parse_field, stufe
from .report import FAIL, PASS, Report
from .sl2 import (
    Commutation,
    Mat2,
    ProjMat,
    build_anticommuting_pair,
    commutation_type,
    h_elem,
    identity,
    matrix_from_json,
    random_sl2,
)
from .witt import WittExpression, signature, witt_equal, witt_norm

__all__ = [
    "ExtContext",
    "ExtElement",
    "RelativeRep",
    "RelatorError",
    "SurfaceRep",
    "closed_from_pieces",
    "commutator_formula_rhs",
    "eval_closed_surface",
    "ext_commutator",
    "ext_inv",
    "ext_lift",
    "ext_mul",
    "genus_one_piece",
    "glue_eval",
    "milnor_wood_audit",
    "psi_image",
    "relative_class",
    "sample_closed_rep",
    "torus_realize",
]


class RelatorError(ValueError):
    pass


@dataclass(frozen=True)
class ExtContext:
    kind: CocycleKind
    field: object

    @property
    def psl(self):
        return self.kind.is_psl

    def coerce(self, g):
        if self.psl:
            return g if isinstance(g, ProjMat) else ProjMat(g)
        if isinstance(g, ProjMat):
            raise ValueError("SL2 context needs matrices, not PSL2 elements")  # noqa: TRY004  callers catch ValueError
        return g

    def identity(self):
        return self.coerce(identity(self.field))


@dataclass(frozen=True)
class ExtElement:
    g: object
    u: WittExpression
    ctx: ExtContext

    def __mul__(self, other):
        return ext_mul(self, other)


def ext_lift(ctx, g, u=None):
    g = ctx.coerce(g)
    return ExtElement(g, u if u is not None else WittExpression(ctx.field), ctx)


def _same(p, q):
    if p.ctx != q.ctx:
        raise ValueError("extension elements from different contexts")


def ext_mul(p, q):
    _same(p, q)
    return ExtElement(p.g * q.g, p.u + q.u + evaluate(p.ctx.kind, p.g, q.g), p.ctx)


def ext_inv(p):
    gi = p.g.inverse()
    return ExtElement(gi, -p.u - evaluate(p.ctx.kind, p.g, gi), p.ctx)


def ext_commutator(p, q):
    return ext_mul(ext_mul(ext_mul(p, q), ext_inv(p)), ext_inv(q))


def psi_image(p):
    """U-part of a central element, with the lift of -I read as <1,1>."""
    g = p.g
    if isinstance(g, ProjMat):
        if not g.is_identity():
            raise ValueError("element is not central")
        return p.u
    if g.is_identity():
        return p.u
    if g.is_minus_identity():
        return p.u + hyperbolic_plane(p.ctx.field)
    raise ValueError("element is not central")


def commutator_formula_rhs(a, b, kind):
    """Predicted value of the commutator of lifts of an anti-commuting pair:
    <1,1> + c(a,b) - c(b,a) - c(-I,ba) for SL2 cocycles, c(a,b) - c(b,a)
    for PSL2 cocycles (where a and b commute)."""
    kind = CocycleKind.parse(kind)
    A = a.rep if isinstance(a, ProjMat) else a
    B = b.rep if isinstance(b, ProjMat) else b
    if commutation_type(A, B) is not Commutation.ANTICOMMUTE:
        raise ValueError("pair does not anti-commute")
    K = A.field
    if kind.is_psl:
        x, y = ProjMat(A), ProjMat(B)
        return evaluate(kind, x, y) - evaluate(kind, y, x)
    minus = -identity(K)
    return hyperbolic_plane(K) + evaluate(kind, A, B) - evaluate(kind, B, A) - evaluate(kind, minus, B * A)


# ---------------------------------------------------------------------------
# representations


def _as_group(group, A):
    return ProjMat(A) if group == "PSL2" else A


def _relator(monodromies):
    K = monodromies[0].field
    P = identity(K)
    for X, Y in zip(monodromies[0::2], monodromies[1::2]):
        P = P * X * Y * X.inverse() * Y.inverse()
    return P


def _check_matrices(monodromies, genus):
    if genus < 1:
        raise ValueError("genus must be at least 1")
    if len(monodromies) != 2 * genus:
        raise ValueError(f"expected {2 * genus} monodromies, got {len(monodromies)}")
    for M in monodromies:
        if not isinstance(M, Mat2) or not M.is_sl2():
            raise ValueError("monodromies must be SL2 matrices")


@dataclass
class SurfaceRep:
    genus: int
    group: str
    field: object
    monodromies: list

    def __post_init__(self):
        if self.group not in ("SL2", "PSL2"):
            raise ValueError(f"unknown group {self.group!r}")
        _check_matrices(self.monodromies, self.genus)

    def relator(self):
        return _relator(self.monodromies)

    def check(self):
        P = self.relator()
        ok = P.is_identity() or (self.group == "PSL2" and P.is_minus_identity())
        if not ok:
            raise RelatorError(f"product of commutators is {P!r}, not the identity")
        return self

    def conjugate(self, C):
        Ci = C.inverse()
        return SurfaceRep(self.genus, self.group, self.field, [C * M * Ci for M in self.monodromies])

    def to_json(self):
        return {
            "genus": self.genus,
            "group": self.group,
            "field": str(self.field),
            "monodromies": [M.to_json() for M in self.monodromies],
        }

    @classmethod
    def from_json(cls, obj):
        K = parse_field(obj["field"])
        mons = [matrix_from_json(m, K) for m in obj["monodromies"]]
        return cls(int(obj["genus"]), obj.get("group", "SL2"), K, mons)


@dataclass
class RelativeRep:
    genus: int
    group: str
    field: object
    monodromies: list
    boundary: Mat2 = None

    def __post_init__(self):
        if self.group not in ("SL2", "PSL2"):
            raise ValueError(f"unknown group {self.group!r}")
        _check_matrices(self.monodromies, self.genus)
        if self.boundary is None:
            self.boundary = identity(self.field)

    def check(self):
        P = _relator(self.monodromies)
        W = self.boundary
        if not (P == W or (self.group == "PSL2" and P == -W)):
            raise RelatorError("product of commutators does not match the boundary")
        return self

    def to_json(self):
        return {
            "genus": self.genus,
            "group": self.group,
            "field": str(self.field),
            "monodromies": [M.to_json() for M in self.monodromies],
            "boundary": self.boundary.to_json(),
        }


def _context(group, kind, K):
    kind = CocycleKind.parse(kind)
    if group == "PSL2" and not kind.is_psl:
        raise ValueError(f"{kind.value} is an SL2 cocycle; the representation is PSL2")
    return ExtContext(kind, K)


def relative_class(rep, kind):
    """U-part of (prod [X_i, Y_i] lifted) * lift(W)^-1, products left to right."""
    rep.check()
    ctx = _context(rep.group, kind, rep.field)
    acc = ext_lift(ctx, identity(rep.field))
    mons = rep.monodromies
    for X, Y in zip(mons[0::2], mons[1::2]):
        acc = ext_mul(acc, ext_commutator(ext_lift(ctx, X), ext_lift(ctx, Y)))
    acc = ext_mul(acc, ext_inv(ext_lift(ctx, rep.boundary)))
    g = acc.g
    if not g.is_identity():
        raise RelatorError("relative class has non-trivial group part")
    return acc.u


def eval_closed_surface(rep, kind):
    rep.check()
    rel = RelativeRep(rep.genus, rep.group, rep.field, rep.monodromies)
    return relative_class(rel, kind)


def closed_from_pieces(rep1, rep2):
    """(X1, Y1, ..., Y'_g, X'_g, ..., Y'_1, X'_1): rep1 glued to the
    orientation reversal of rep2."""
    m2 = rep2.monodromies
    rev = []
    for i in range(rep2.genus - 1, -1, -1):
        rev += [m2[2 * i + 1], m2[2 * i]]
    group = "PSL2" if "PSL2" in (rep1.group, rep2.group) or rep1.boundary != rep2.boundary else "SL2"
    return SurfaceRep(rep1.genus + rep2.genus, group, rep1.field, list(rep1.monodromies) + rev)


def glue_eval(rep1, rep2, kind, cross_check=True):
    """c(rep1) - c(rep2) for a PSL2 cocycle; optionally cross-checked
    against the closed evaluation of the glued representation."""
    kind = CocycleKind.parse(kind)
    if not kind.is_psl:
        raise ValueError("gluing needs a PSL2 cocycle")
    W1, W2 = rep1.boundary, rep2.boundary
    if not (W1 == W2 or W1 == -W2):
        raise RelatorError("boundary monodromies differ in PSL2")
    r1 = RelativeRep(rep1.genus, "PSL2", rep1.field, rep1.monodromies, W1)
    r2 = RelativeRep(rep2.genus, "PSL2", rep2.field, rep2.monodromies, W1)
    val = relative_class(r1, kind) - relative_class(r2, kind)
    if cross_check:
        closed = closed_from_pieces(r1, r2)
        closed.group = "PSL2"
        direct = eval_closed_surface(closed, kind)
        if not witt_equal(val, direct).equal:
            raise AssertionError(f"gluing mismatch: {val} vs {direct}")
    return val


def torus_realize(K, eta, kind="corrected-psl2"):
    """PSL2 torus representation from an anti-commuting eta-pair, and its class."""
    if K == QQ or stufe(K).value != 2:
        raise ValueError(f"{K} does not have stufe 2")
    a, b, _ = build_anticommuting_pair(K, eta)
    rep = SurfaceRep(1, "PSL2", K, [a, b])
    return rep, eval_closed_surface(rep, kind)


# ---------------------------------------------------------------------------
# samplers


def _eigenvector(M, mu):
    K = M.field
    if M.a12:
        return (M.a12, mu - M.a11)
    if M.a21:
        return (mu - M.a22, M.a21)
    return (K.one, K.zero) if M.a11 == mu else (K.zero, K.one)


def genus_one_piece(K, rng, mu, height=4):
    """(X, Y) with [X, Y] = diag(mu, 1/mu) exactly (mu != 0, +-1)."""
    mu = K(mu)
    if not mu or mu == 1 or mu == -1:
        raise ValueError("mu must be different from 0, 1, -1")
    while True:
        lam = K.random_element(rng, height, nonzero=True)
        if lam != 1 and lam != -1:
            break
    s = (lam - 1 / lam) ** 2
    tr = mu + 1 / mu
    bc = (2 - tr) / s
    b = K.random_element(rng, height, nonzero=True)
    a = K.random_element(rng, height, nonzero=True)
    c = bc / b
    d = (1 + bc) / a
    X = h_elem(K, lam)
    Y = Mat2(K, a, b, c, d)
    M = X * Y * X.inverse() * Y.inverse()
    v1, v2 = _eigenvector(M, mu), _eigenvector(M, 1 / mu)
    det = v1[0] * v2[1] - v1[1] * v2[0]
    S = Mat2(K, v1[0], v2[0] / det, v1[1], v2[1] / det)
    Si = S.inverse()
    X, Y = Si * X * S, Si * Y * S
    W = X * Y * X.inverse() * Y.inverse()
    if W != h_elem(K, mu):
        raise AssertionError("genus-one piece has the wrong boundary")
    return X, Y


def _random_mu(K, rng, height):
    while True:
        mu = K.random_element(rng, height, nonzero=True)
        if mu != 1 and mu != -1:
            return mu


def _torus_block(K, rng, height, psl):
    if psl and K != QQ and not K.is_formally_real and stufe(K).at_most_two and rng.random() < 0.3:
        a, b, _ = build_anticommuting_pair(K, K.random_element(rng, height, nonzero=True))
        return [a, b]
    return list(commuting_pair(K, rng, height, psl))


def _genus_two_block(K, rng, height, psl):
    fam = rng.randrange(3 if not psl else 4)
    if fam == 0:
        X, Y = random_sl2(K, rng, height, 2), random_sl2(K, rng, height, 2)
        return [X, Y, Y, X], "doubled"
    if fam == 1:
        X, Y = random_sl2(K, rng, height, 2), random_sl2(K, rng, height, 2)
        M = X * Y * X.inverse() * Y.inverse()
        c = M ** rng.choice([-1, 1, 2])
        ci = c.inverse()
        return [X, Y, c * Y * ci, c * X * ci], "twisted"
    mu = _random_mu(K, rng, height)
    X1, Y1 = genus_one_piece(K, rng, mu, height)
    if fam == 2:
        X2, Y2 = genus_one_piece(K, rng, mu, height)
        return [X1, Y1, Y2, X2], "glued"
    # PSL2 only: boundaries diag(mu, 1/mu) and diag(-mu, -1/mu)
    X2, Y2 = genus_one_piece(K, rng, -mu, height)
    return [X1, Y1, Y2, X2], "glued-psl"


def sample_closed_rep(K, rng, genus, group="PSL2", height=4):
    """A closed representation from the documented families: commuting
    tori, doubles, centraliser twists, glued genus-one pieces, followed by a
    global conjugation and (for PSL2) random sign changes."""
    psl = group == "PSL2"
    mons, fams = [], []
    g = genus
    while g > 0:
        if g >= 2 and rng.random() < 0.7:
            block, fam = _genus_two_block(K, rng, height, psl)
            mons += block
            fams.append(fam)
            g -= 2
        else:
            mons += _torus_block(K, rng, height, psl)
            fams.append("torus")
            g -= 1
    C = random_sl2(K, rng, height, 2)
    Ci = C.inverse()
    mons = [C * M * Ci for M in mons]
    if psl:
        mons = [-M if rng.random() < 0.5 else M for M in mons]
    rep = SurfaceRep(genus, group, K, mons)
    return rep.check(), fams


def milnor_wood_audit(field=QQ, genus=1, samples=1000, seed=0, kind="witt-psl2", height=4):
    """Evaluate sampled closed representations over Q and check
    norm <= 4(g-1)+2 and |signature| <= 4(g-1)."""
    K = parse_field(field) if isinstance(field, str) else field
    if K != QQ:
        raise ValueError("the audit needs Q (norm and signature)")
    rng = random.Random(seed)
    rep = Report("audit mw", {"field": str(K), "genus": genus, "samples": samples, "seed": seed, "cocycle": kind})
    norm_bound, sig_bound = 4 * (genus - 1) + 2, 4 * (genus - 1)
    max_norm = max_sig = 0
    nonzero = 0
    hist = {}
    violations = []
    for _ in range(samples):
        r, fams = sample_closed_rep(K, rng, genus, "PSL2", height)
        val = eval_closed_surface(r, kind)
        n, s = witt_norm(val), abs(signature(val))
        hist[n] = hist.get(n, 0) + 1
        nonzero += n > 0
        max_norm, max_sig = max(max_norm, n), max(max_sig, s)
        if n > norm_bound or s > sig_bound or (genus == 1 and n):
            violations.append({"rep": r, "families": fams, "class": val, "norm": n, "signature": s})
    rep.data = {
        "max_norm": max_norm,
        "max_abs_signature": max_sig,
        "norm_bound": norm_bound,
        "signature_bound": sig_bound,
        "norm_histogram": {str(k): v for k, v in sorted(hist.items())},
        "violations": violations[:5],
    }
    rep.counts = {"samples": samples, "nonzero": nonzero, "violations": len(violations)}
    return rep.finish(FAIL if violations else PASS)
