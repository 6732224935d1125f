"""Deciding equality in W(K), anisotropic dimension and the Witt norm."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from ..fields import QQ, FieldMismatchError, QuadraticField
from . import local
from .forms import _same_class, canonical_coefficient

__all__ = [
    "DEFAULT_BUDGET",
    "EqualityVerdict",
    "Verdict",
    "anisotropic_dimension",
    "is_witt_zero",
    "rewrite_zero",
    "witt_equal",
    "witt_norm",
]

DEFAULT_BUDGET = 10_000

# local-global is attempted only while the numbers to factor stay below this
_FACTOR_LIMIT = 10**60


class Verdict(enum.Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not_equal"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EqualityVerdict:
    verdict: Verdict
    method: str = ""
    reason: str = ""
    states: int = 0

    @property
    def equal(self):
        return self.verdict is Verdict.EQUAL

    @property
    def not_equal(self):
        return self.verdict is Verdict.NOT_EQUAL

    @property
    def unknown(self):
        return self.verdict is Verdict.UNKNOWN

    def __bool__(self):
        return self.equal

    def __str__(self):
        if self.unknown:
            return "unknown(budget_exhausted)"
        return self.verdict.value


def _cancel(q):
    """Entries of an honest form Witt-equivalent to q, with obvious
    hyperbolic pairs <a> + <-a> removed."""
    K = q.field
    entries = q.entries()
    out = []
    for e in entries:
        for i, f in enumerate(out):
            if _same_class(K, -e, f):
                del out[i]
                break
        else:
            out.append(e)
    return out


def _signed_det(K, entries):
    det = K.one
    for e in entries:
        det = det * e
    n = len(entries)
    return -det if (n * (n - 1) // 2) % 2 else det


def _factorable(K, entries):
    if K == QQ:
        return True
    for e in entries:
        n = e.norm()
        if abs(n.numerator) > _FACTOR_LIMIT or n.denominator > _FACTOR_LIMIT:
            return False
    return True


def _local_global_zero(K, entries):
    """Complete test for the hyperbolicity of <entries> over Q or Q(sqrt d)."""
    if len(entries) % 2:
        return False, "odd dimension"
    if not entries:
        return True, ""
    if not K.is_square(_signed_det(K, entries)):
        return False, "signed determinant is not a square"
    for pl in local.infinite_places(K):
        if not local.local_witt_zero(pl, entries):
            return False, f"nonzero signature at {pl}"
    for pl in local.relevant_places(K, entries):
        if not local.local_witt_zero(pl, entries):
            return False, f"not hyperbolic at {pl}"
    return True, ""


def is_witt_zero(q, method="auto", budget=DEFAULT_BUDGET):
    """EqualityVerdict for q = 0 in W(K)."""
    K = q.field
    entries = _cancel(q)
    if len(entries) % 2:
        return EqualityVerdict(Verdict.NOT_EQUAL, "invariants", "odd dimension")
    if K.is_finite:
        ok = K.is_square(_signed_det(K, entries))
        return EqualityVerdict(Verdict.EQUAL if ok else Verdict.NOT_EQUAL, "finite field")
    if method == "auto" and (K == QQ or (isinstance(K, QuadraticField) and _factorable(K, entries))):
        ok, why = _local_global_zero(K, entries)
        return EqualityVerdict(Verdict.EQUAL if ok else Verdict.NOT_EQUAL, "local-global", why)
    if method not in ("auto", "rewrite"):
        raise ValueError(f"unknown method {method!r}")
    return rewrite_zero(K, entries, budget)


def witt_equal(q1, q2, method="auto", budget=DEFAULT_BUDGET):
    """Decide q1 = q2 in W(K): equal, not_equal, or unknown (rewrite engine only)."""
    if q1.field != q2.field:
        raise FieldMismatchError(f"{q1.field} vs {q2.field}")
    return is_witt_zero(q1 - q2, method=method, budget=budget)


# ---------------------------------------------------------------------------
# rewrite engine


_SCALES = (1, 2, 3)


def rewrite_zero(K, entries, budget=DEFAULT_BUDGET):
    """Bounded search for a reduction of <entries> to the empty form.

    Moves: drop a hyperbolic pair <a, b> with -a/b a square, or replace
    <a, b> by <c, abc> with c = a x^2 + b y^2 != 0 for small x, y. Only
    invariant obstructions (dimension, signed determinant) ever give
    not_equal; running out of budget gives unknown.
    """
    entries = [canonical_coefficient(K, e) for e in entries]
    if len(entries) % 2:
        return EqualityVerdict(Verdict.NOT_EQUAL, "rewrite", "odd dimension")
    if not K.is_square(_signed_det(K, entries)):
        return EqualityVerdict(Verdict.NOT_EQUAL, "rewrite", "signed determinant is not a square")

    def key(state):
        return tuple(sorted(K.format(e) for e in state))

    def cancel(state):
        state = list(state)
        changed = True
        while changed:
            changed = False
            for i, j in itertools.combinations(range(len(state)), 2):
                if _same_class(K, -state[i], state[j]):
                    del state[j], state[i]
                    changed = True
                    break
        return state

    start = cancel(entries)
    frontier = [start]
    seen = {key(start)}
    states = 1
    while frontier:
        nxt = []
        for state in frontier:
            if not state:
                return EqualityVerdict(Verdict.EQUAL, "rewrite", "", states)
            for i, j in itertools.combinations(range(len(state)), 2):
                a, b = state[i], state[j]
                rest = [e for k, e in enumerate(state) if k not in (i, j)]
                for x, y in itertools.product(_SCALES, repeat=2):
                    c = a * (x * x) + b * (y * y)
                    if not c:
                        continue
                    new = cancel(rest + [canonical_coefficient(K, c), canonical_coefficient(K, a * b * c)])
                    k = key(new)
                    if k in seen:
                        continue
                    seen.add(k)
                    states += 1
                    if not new:
                        return EqualityVerdict(Verdict.EQUAL, "rewrite", "", states)
                    if states >= budget:
                        return EqualityVerdict(Verdict.UNKNOWN, "rewrite", "budget exhausted", states)
                    nxt.append(new)
        frontier = nxt
    return EqualityVerdict(Verdict.UNKNOWN, "rewrite", "search space exhausted", states)


# ---------------------------------------------------------------------------
# anisotropic dimension


def _require_q(q):
    if q.field != QQ:
        raise ValueError(f"unsupported field {q.field}: only Q is supported")


def anisotropic_dimension(q):
    """Dimension of the anisotropic part of an honest form over Q: the
    maximum over all places of the local anisotropic dimension."""
    _require_q(q)
    if not q.is_honest:
        raise ValueError("anisotropic_dimension needs an honest form; use witt_norm")
    return _aniso(QQ, q.entries())


def _aniso(K, entries):
    if not entries:
        return 0
    places = local.infinite_places(K) + local.relevant_places(K, entries)
    return max(local.local_aniso_dim(pl, entries) for pl in places)


def witt_norm(q):
    """Anisotropic dimension of the Witt class of q over Q."""
    _require_q(q)
    return _aniso(QQ, _cancel(q))
