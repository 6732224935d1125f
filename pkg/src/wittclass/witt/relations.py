"""Replays of standard Witt-ring identities: four-torsion at stufe 2 and
the Steinberg relations under the Pfister map."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..fields import two_square_witness
from .equality import witt_equal
from .forms import WittExpression, pfister2

__all__ = ["Transcript", "replay_four_torsion", "steinberg_checks", "verify_steinberg_relation"]


@dataclass
class Transcript:
    steps: list = field(default_factory=list)  # (description, ok)
    conclusion: str = ""

    @property
    def valid(self):
        return bool(self.steps) and all(ok for _, ok in self.steps)

    def check(self, text, ok):
        self.steps.append((text, bool(ok)))
        return ok

    def to_json(self):
        return {
            "valid": self.valid,
            "steps": [{"step": t, "ok": ok} for t, ok in self.steps],
            "conclusion": self.conclusion,
        }


def replay_four_torsion(K, a):
    """Replay 4<a> = 0 for a field with -1 = x^2 + y^2, x*y != 0, checking
    every side condition, then derive 2<1,1> = 0."""
    w = two_square_witness(K, nonzero=True)
    if w is None:
        raise ValueError(f"{K}: no two-square witness for -1")
    x, y = w
    a = K(a)
    if not a:
        raise ValueError("a must be nonzero")
    T = Transcript()

    def form(*e):
        return WittExpression.form(K, list(e))

    A = WittExpression.rank_one(K, a)
    T.check(f"witness: ({K.format(x)})^2 + ({K.format(y)})^2 = -1", x * x + y * y == K(-1) and x and y)
    T.check("4<a> = <a,a,a,a>", witt_equal(4 * A, form(a, a, a, a)).equal)
    rhs1 = form(a, a) - form(-a, -a)
    T.check("<a,a,a,a> = <a> + <a> - <-a> - <-a>", witt_equal(form(a, a, a, a), rhs1).equal)
    u, v = a * x * x, a * y * y
    s = u + v
    T.check("a x^2 + a y^2 = -a (nonzero)", s == -a and s)
    T.check("<a x^2 a y^2 (a x^2 + a y^2)> = <-a> (square classes)", K.is_square(u * v * s / (-a)))
    rhs2 = form(a, a) - form(s, u * v * s)
    T.check("substitution gives <a,a> - <ax^2+ay^2, ax^2 ay^2 (ax^2+ay^2)>", rhs2 == rhs1)
    T.check(
        "Witt relation <u,v> = <u+v, uv(u+v)> with u = ax^2, v = ay^2",
        witt_equal(form(u, v), form(s, u * v * s)).equal,
    )
    rhs3 = form(a, a) - form(u, v)
    T.check("<a x^2> = <a> and <a y^2> = <a>", K.is_square(u / a) and K.is_square(v / a))
    T.check("<a,a> - <a x^2, a y^2> = 0", (rhs3 == WittExpression(K)) and witt_equal(rhs3, WittExpression(K)).equal)
    T.check("hence 4<a> = 0", witt_equal(4 * A, WittExpression(K)).equal)
    T.check("2<1,1> = 4<1> = 0", witt_equal(2 * form(1, 1), WittExpression(K)).equal)
    T.conclusion = f"4<{K.format(a)}> = 0 and 2<1,1> = 0 in W({K})" if T.valid else "replay failed"
    return T


def steinberg_checks(K, s, t, r):
    """The Steinberg-type relations pushed through {s,t} -> <<s,t>>."""
    s, t, r = K(s), K(t), K(r)
    if not (s and t and r):
        raise ValueError("Steinberg relations need nonzero arguments")
    P = lambda u, v: pfister2(u, v, field=K)
    zero = WittExpression(K)
    out = {
        "cocycle": witt_equal(P(s * t, r) + P(s, t), P(s, t * r) + P(t, r)).equal,
        "unit": witt_equal(P(K.one, s), zero).equal,
        "inverse": witt_equal(P(s, t), P(1 / t, s)).equal,
        "minus": witt_equal(P(s, t), P(s, -s * t)).equal,
    }
    if s != 1:
        out["steinberg"] = witt_equal(P(s, t), P(s, (1 - s) * t)).equal
    return out


def verify_steinberg_relation(K, s, t, r):
    return all(steinberg_checks(K, s, t, r).values())
