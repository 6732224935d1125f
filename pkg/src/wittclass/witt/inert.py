"""Anisotropy at an inert prime and the resulting 2I-exclusion certificate."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..fields import reduce_at_inert_prime, residue_field, valuation_at_inert_prime
from .forms import WittExpression

__all__ = ["LocalVerdict", "NotIn2ICertificate", "local_anisotropy_at_inert_prime", "not_in_2I_certificate"]


@dataclass(frozen=True)
class LocalVerdict:
    anisotropic: bool
    p: int
    residue_forms: tuple  # (even-valuation residues, odd-valuation residues)

    @property
    def isotropic(self):
        return not self.anisotropic

    def __str__(self):
        return "anisotropic" if self.anisotropic else "isotropic"


def _entries(q):
    if isinstance(q, WittExpression):
        if not q.is_honest:
            raise ValueError("expected an honest diagonal form")
        return q.field, q.entries()
    raise TypeError("expected a WittExpression")


def _residue_anisotropic(F, form):
    n = len(form)
    if n <= 1:
        return True
    if n == 2:
        return not F.is_square(-form[0] * form[1])
    return False


def local_anisotropy_at_inert_prime(q, p):
    """Is the diagonal form q anisotropic over the completion of K at the
    inert odd prime p? Decided from the two residue forms over F_{p^2}."""
    K, entries = _entries(q)
    F = residue_field(K, p)
    parts = ([], [])
    for x in entries:
        if not x:
            raise ValueError("zero entry")
        v = valuation_at_inert_prime(K, p, x)
        u = x / K(p) ** v
        parts[v % 2].append(reduce_at_inert_prime(K, p, u))
    aniso = all(_residue_anisotropic(F, part) for part in parts)
    return LocalVerdict(aniso, p, (tuple(parts[0]), tuple(parts[1])))


@dataclass
class NotIn2ICertificate:
    """Record of the argument that a 4-dimensional form is not in 2I(K)."""

    field: object
    p: int
    q: WittExpression
    q_prime: WittExpression
    verdict_q: LocalVerdict
    verdict_q_prime: LocalVerdict
    chain: list = field(default_factory=list)

    def to_json(self):
        return {
            "field": str(self.field),
            "p": self.p,
            "q": str(self.q),
            "q_prime": str(self.q_prime),
            "q_at_p": str(self.verdict_q),
            "q_prime_at_p": str(self.verdict_q_prime),
            "chain": list(self.chain),
        }


def not_in_2I_certificate(q, p):
    """Certificate that q is not in 2I(K), or None when the local test at p
    is inconclusive.

    Write q = <1> + q0 (after scaling by the first entry, which does not
    change membership in the ideal 2I). If q were in 2I it would be <1,1>
    times a binary form representing 1, so q = <1,1,b,b> and cancellation
    gives q0 = <1,b,b>. Then q' = <-1> + q0 contains <-1,1> and is isotropic.
    Anisotropy of q' at p rules this out.
    """
    K, entries = _entries(q)
    if len(entries) != 4:
        raise ValueError("certificate needs a 4-dimensional form")
    if entries[0] != 1:
        a = entries[0]
        entries = [e / a for e in entries]
        q = WittExpression.form(K, entries)
    q_prime = WittExpression.form(K, [-entries[0]] + entries[1:])
    vq = local_anisotropy_at_inert_prime(q, p)
    vqp = local_anisotropy_at_inert_prime(q_prime, p)
    if not (vq.anisotropic and vqp.anisotropic):
        return None
    chain = [
        f"q = {q} = <1> + q0 is anisotropic at {p}",
        "if q were in 2I(K), then q = <1,1>*<1,b> = <1,1,b,b> for some b",
        "Witt cancellation of <1> gives q0 = <1,b,b>",
        f"so q' = {q_prime} = <-1> + q0 would contain <-1,1> and be isotropic",
        f"but q' is anisotropic at {p}: contradiction, so q is not in 2I(K)",
    ]
    return NotIn2ICertificate(K, p, q, q_prime, vq, vqp, chain)
