"""The Witt cocycle, the Moore cocycle image, Nekovar corrections and
sampled checks of the cocycle identity and related equalities."""

from __future__ import annotations

import enum
import random

from .fields import QQ, is_square, parse_field, stufe
from .report import COUNTEREXAMPLE, FAIL, PASS, UNKNOWN, Report
from .sl2 import (
    G1,
    Commutation,
    ProjMat,
    bruhat_decompose,
    build_anticommuting_pair,
    commutation_type,
    g1,
    h_elem,
    identity,
    random_sl2,
    sigma,
    x_elem,
)
from .witt import (
    DEFAULT_BUDGET,
    WittExpression,
    ideal_membership,
    is_witt_zero,
    pfister2,
    witt_equal,
)

__all__ = [
    "CocycleKind",
    "commuting_pair",
    "corrected_cocycle",
    "equicommutativity_scan",
    "evaluate",
    "hyperbolic_plane",
    "is_cocycle",
    "lift",
    "moore_cocycle",
    "moore_psl_cocycle",
    "nekovar_n",
    "nekovar_tilde",
    "random_element",
    "verify_prop52",
    "verify_thm53",
    "witt_cocycle",
]


class CocycleKind(enum.Enum):
    WITT_SL2 = "witt-sl2"
    WITT_PSL2 = "witt-psl2"
    MOORE = "moore"
    CORRECTED_SL2 = "corrected-sl2"
    CORRECTED_PSL2 = "corrected-psl2"

    @property
    def is_psl(self):
        return self in (CocycleKind.WITT_PSL2, CocycleKind.CORRECTED_PSL2)

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown cocycle {name!r}; choose from {[k.value for k in cls]}") from None


def _mat(x):
    return x.rep if isinstance(x, ProjMat) else x


def lift(x):
    """sigma-positive lift of +-A under the current sign convention."""
    A = _mat(x)
    return A if sigma(A) == 1 else -A


def hyperbolic_plane(K):
    """<1,1>, the image of h(-1)."""
    return WittExpression(K, [(K.one, 2)])


def witt_cocycle(x, y):
    """[-A21 (AB)21 B21], with <0> = 0."""
    A, B = _mat(x), _mat(y)
    K = A.field
    c = A.a21 * (A.a21 * B.a11 + A.a22 * B.a21) * B.a21
    if not c:
        return WittExpression(K)
    return WittExpression(K, [(-c, 1)])


def _rank1(K, *pairs):
    return WittExpression(K, pairs)


def moore_cocycle(g, h):
    """Image of the Moore cocycle in I^2(K), by Bruhat cells."""
    K = g.field
    f1, f2 = bruhat_decompose(g), bruhat_decompose(h)
    t, t2 = f1.t, f2.t
    if isinstance(f1, G1) or isinstance(f2, G1):
        return pfister2(t, t2, field=K)
    w = -(f1.v + f2.u)
    if w:
        return _rank1(K, (w, 1), (t, -1), (t2, -1), (t * t2 * w, 1))
    return _rank1(K, (K.one, -1), (t, -1), (t2, -1), (t * t2, -1))


def nekovar_n(g):
    K = g.field
    f = bruhat_decompose(g)
    if isinstance(f, G1):
        return _rank1(K, (K.one, 1), (f.t, -1))
    return _rank1(K, (f.t, -1))


def nekovar_tilde(x):
    return nekovar_n(lift(x))


def corrected_cocycle(kind, x, y):
    """w(x, y) + n(x) - n(xy) + n(y), with n or n~ according to the kind."""
    kind = CocycleKind.parse(kind)
    if kind is CocycleKind.CORRECTED_SL2:
        A, B = _mat(x), _mat(y)
        return witt_cocycle(A, B) + nekovar_n(A) - nekovar_n(A * B) + nekovar_n(B)
    if kind is CocycleKind.CORRECTED_PSL2:
        A, B = _mat(x), _mat(y)
        return witt_cocycle(A, B) + nekovar_tilde(A) - nekovar_tilde(A * B) + nekovar_tilde(B)
    raise ValueError(f"{kind.value} is not a corrected cocycle")


def moore_psl_cocycle(x, y):
    """Moore cocycle of PSL2 for the lift +-A -> sigma(A)A, pushed to I^2_+
    by h(-1) -> <1,1>."""
    A, B = lift(x), lift(y)
    K = A.field
    AB = _mat(x) * _mat(y)
    lab = lift(AB)
    val = moore_cocycle(A, B)
    if A * B == lab:
        return val
    minus = -identity(K)
    return val + hyperbolic_plane(K) - moore_cocycle(minus, lab)


def evaluate(kind, x, y):
    kind = CocycleKind.parse(kind)
    if kind in (CocycleKind.WITT_SL2, CocycleKind.WITT_PSL2):
        return witt_cocycle(x, y)
    if kind is CocycleKind.MOORE:
        return moore_cocycle(_mat(x), _mat(y))
    return corrected_cocycle(kind, x, y)


# ---------------------------------------------------------------------------
# sampling


def _borel(K, rng, height):
    t = K.random_element(rng, height, nonzero=True)
    return g1(K, K.random_element(rng, height), t)


def random_element(K, rng, height=5, psl=False):
    """Mostly generic products, sometimes Borel elements or +-I."""
    r = rng.random()
    if r < 0.05:
        A = identity(K) if rng.random() < 0.5 else -identity(K)
    elif r < 0.25:
        A = _borel(K, rng, height)
    else:
        A = random_sl2(K, rng, height, factors=rng.randint(1, 3))
    if rng.random() < 0.5:
        A = -A
    return ProjMat(A) if psl else A


def _conjugate(C, A):
    return C * A * C.inverse()


def commuting_pair(K, rng, height=4, psl=False):
    """A pair that commutes in SL2 (or, with ``psl``, possibly only up to sign)."""
    fam = rng.randrange(4)
    C = random_sl2(K, rng, height, factors=2)
    if fam == 0:
        A = random_sl2(K, rng, height, factors=2)
        B = A ** rng.choice([-2, -1, 0, 1, 2, 3])
    elif fam == 1:
        A = _conjugate(C, h_elem(K, K.random_element(rng, height, nonzero=True)))
        B = _conjugate(C, h_elem(K, K.random_element(rng, height, nonzero=True)))
    elif fam == 2:
        A = _conjugate(C, x_elem(K, K.random_element(rng, height)))
        B = _conjugate(C, x_elem(K, K.random_element(rng, height)))
        if rng.random() < 0.5:
            B = -B
    else:
        A = random_sl2(K, rng, height, factors=2)
        tr = A.trace()
        while True:
            lam = K.random_element(rng, height)
            den = lam * lam + lam * tr + 1
            if den:
                break
        beta = -(2 * lam + tr) / den
        alpha = 1 + lam * beta
        B = A.scale(beta) + identity(K).scale(alpha)
        if not B.is_sl2():
            raise AssertionError("centraliser parametrisation left SL2")
    if psl and rng.random() < 0.5:
        B = -B
    return A, B


# ---------------------------------------------------------------------------
# campaigns


def _field(field):
    return parse_field(field) if isinstance(field, str) else field


def _sample_triple(K, rng, psl, height):
    return tuple(random_element(K, rng, height, psl) for _ in range(3))


def _mul(x, y):
    return x * y


def is_cocycle(kind, field, samples=1000, seed=0, height=5, budget=DEFAULT_BUDGET, cocycle=None):
    """Check c(y,z) - c(xy,z) + c(x,yz) - c(x,y) = 0 on sampled triples.

    ``cocycle`` overrides the evaluator (used for corrupted fixtures)."""
    kind = CocycleKind.parse(kind)
    K = _field(field)
    c = cocycle or (lambda x, y: evaluate(kind, x, y))
    rng = random.Random(seed)
    rep = Report("verify cocycle", {"cocycle": kind.value, "field": str(K), "samples": samples, "seed": seed})
    violations, unknown = [], 0
    for _ in range(samples):
        x, y, z = _sample_triple(K, rng, kind.is_psl, height)
        xy, yz = _mul(x, y), _mul(y, z)
        expr = c(y, z) - c(xy, z) + c(x, yz) - c(x, y)
        v = is_witt_zero(expr, budget=budget)
        if v.unknown:
            unknown += 1
        elif v.not_equal:
            if len(violations) < 5:
                violations.append({"x": x, "y": y, "z": z, "defect": expr, "reason": v.reason})
            else:
                violations.append(None)
    rep.counts = {"samples": samples, "violations": len(violations), "unknown": unknown}
    rep.data = {"violations": [v for v in violations if v], "unknown_rate": unknown / max(samples, 1)}
    if violations:
        return rep.finish(FAIL)
    return rep.finish(UNKNOWN if unknown else PASS)


def _pair_values(kind, x, y, budget):
    cxy, cyx = evaluate(kind, x, y), evaluate(kind, y, x)
    return cxy, cyx, witt_equal(cxy, cyx, budget=budget)


def equicommutativity_scan(kind, field, mode="psl_commuting", samples=200, seed=0, height=4, budget=DEFAULT_BUDGET):
    """Look for a (PSL-)commuting pair with c(x,y) != c(y,x)."""
    kind = CocycleKind.parse(kind)
    K = _field(field)
    if mode not in ("plus_commuting", "psl_commuting"):
        raise ValueError(f"unknown mode {mode!r}")
    psl = mode == "psl_commuting"
    if psl and not kind.is_psl:
        raise ValueError("psl_commuting mode needs a PSL2 cocycle")
    rng = random.Random(seed)
    rep = Report(
        "verify equicomm", {"cocycle": kind.value, "field": str(K), "mode": mode, "samples": samples, "seed": seed}
    )
    anti = psl and K != QQ and not K.is_formally_real and stufe(K).at_most_two
    unknown = 0
    for i in range(samples):
        if anti and i % 2 == 1:
            eta = K.random_element(rng, height, nonzero=True)
            A, B, params = build_anticommuting_pair(K, eta)
            origin = {"family": "anti-commuting", "gamma_delta": K.format(params.eta)}
            if i % 4 == 3:
                C = random_sl2(K, rng, height, factors=2)
                A, B = _conjugate(C, A), _conjugate(C, B)
                origin["conjugated"] = True
        else:
            A, B = commuting_pair(K, rng, height, psl)
            origin = {"family": "commuting"}
        rel = commutation_type(A, B)
        if rel is Commutation.NEITHER or (rel is Commutation.ANTICOMMUTE and not psl):
            raise AssertionError("sampler produced a non-commuting pair")
        x, y = (ProjMat(A), ProjMat(B)) if kind.is_psl else (A, B)
        cxy, cyx, v = _pair_values(kind, x, y, budget)
        if v.unknown:
            unknown += 1
            continue
        if v.not_equal:
            minus_one_square = is_square(K, K(-1))
            rep.data = {
                "x": x,
                "y": y,
                "relation": rel.value,
                "c(x,y)": cxy,
                "c(y,x)": cyx,
                "certificate": v.reason or v.method,
                "minus_one_is_square": minus_one_square,
                **origin,
            }
            rep.counts = {"checked": i + 1, "unknown": unknown}
            return rep.finish(COUNTEREXAMPLE)
    rep.counts = {"checked": samples, "unknown": unknown}
    return rep.finish(UNKNOWN if unknown else PASS)


def verify_prop52(field, samples=1000, seed=0, height=5, budget=DEFAULT_BUDGET):
    """w + dn = Moore on sampled SL2 pairs."""
    K = _field(field)
    rng = random.Random(seed)
    rep = Report("verify prop52", {"field": str(K), "samples": samples, "seed": seed})
    bad, unknown = [], 0
    for _ in range(samples):
        A, B = random_element(K, rng, height), random_element(K, rng, height)
        lhs = corrected_cocycle(CocycleKind.CORRECTED_SL2, A, B)
        rhs = moore_cocycle(A, B)
        v = witt_equal(lhs, rhs, budget=budget)
        if v.unknown:
            unknown += 1
        elif v.not_equal:
            bad.append({"A": A, "B": B, "lhs": lhs, "rhs": rhs})
    rep.counts = {"samples": samples, "failures": len(bad), "unknown": unknown}
    rep.data = {"failures": bad[:5]}
    return rep.finish(FAIL if bad else UNKNOWN if unknown else PASS)


def _case_correction(AB_signed):
    """n(M) - n(-M) = -2<t> where t is the Bruhat t-parameter of M."""
    K = AB_signed.field
    t = bruhat_decompose(AB_signed).t
    return WittExpression(K, [(t, -2)])


def verify_thm53(field, samples=1000, seed=0, height=5, budget=DEFAULT_BUDGET):
    """On sampled PSL2 pairs: w + dn~ lies in I^2_+, equals the PSL Moore
    cocycle, and sign-changing pairs carry exactly the -2<t> correction."""
    K = _field(field)
    rng = random.Random(seed)
    rep = Report("verify thm53", {"field": str(K), "samples": samples, "seed": seed})
    bad, unknown = [], 0
    counts = {"same_sign": 0, "sign_change": 0}
    minus = -identity(K)
    for _ in range(samples):
        x, y = random_element(K, rng, height, psl=True), random_element(K, rng, height, psl=True)
        val = corrected_cocycle(CocycleKind.CORRECTED_PSL2, x, y)
        problems = []
        if not ideal_membership(val).in_I2_plus:
            problems.append("not in I2+")
        A, B = lift(x), lift(y)
        M = A * B
        if M == lift(M):
            counts["same_sign"] += 1
            checks = [(val, moore_cocycle(A, B), "differs from Moore on lifts")]
        else:
            counts["sign_change"] += 1
            lhs = hyperbolic_plane(K) - moore_cocycle(minus, -M)
            rhs = nekovar_n(M) - nekovar_n(-M)
            checks = [
                (val, moore_psl_cocycle(x, y), "differs from PSL Moore"),
                (lhs, rhs, "sign-change sides differ"),
                (rhs, _case_correction(M), "correction is not -2<t>"),
            ]
        for left, right, msg in checks:
            v = witt_equal(left, right, budget=budget)
            if v.unknown:
                unknown += 1
            elif v.not_equal:
                problems.append(msg)
        if problems:
            bad.append({"x": x, "y": y, "value": val, "problems": problems})
    rep.counts = {"samples": samples, "failures": len(bad), "unknown": unknown, **counts}
    rep.data = {"failures": bad[:5]}
    return rep.finish(FAIL if bad else UNKNOWN if unknown else PASS)
