"""A worked obstruction over Q(sqrt -3): a Pfister form that is not in 2I."""

from __future__ import annotations

from .fields import (
    PrimeField,
    QuadraticField,
    mult_order,
    reduce_at_inert_prime,
    residue_field,
)
from .report import FAIL, PASS, Report
from .witt import (
    WittExpression,
    hilbert_symbol_local,
    local_anisotropy_at_inert_prime,
    not_in_2I_certificate,
    places_over,
)

__all__ = ["remark44_demo"]


def remark44_demo():
    K = QuadraticField(-3)
    eps = K.parse("-1/2+1/2*r")
    p = 5
    F = residue_field(K, p)
    x = reduce_at_inert_prime(K, p, -(2 + eps))
    order = mult_order(F, x)
    minus_one_square = PrimeField(p).is_square(-1)
    entries = [K.one, -(2 + eps), K(-5), 10 + 5 * eps]
    q = WittExpression.form(K, entries)
    q_prime = WittExpression.form(K, [K(-1)] + entries[1:])
    vq = local_anisotropy_at_inert_prime(q, p)
    vqp = local_anisotropy_at_inert_prime(q_prime, p)
    cert = not_in_2I_certificate(q, p)
    place = places_over(K, p)[0]
    symbol = hilbert_symbol_local(K, 5, 2 + eps, place)
    checks = {
        "order_is_24": order == 24,
        "minus_one_square_mod_5": minus_one_square,
        "q_anisotropic_at_5": vq.anisotropic,
        "q_prime_anisotropic_at_5": vqp.anisotropic,
        "certificate_issued": cert is not None,
    }
    rep = Report("demo remark44", {"field": str(K), "p": p})
    rep.data = {
        "checks": checks,
        "order": order,
        "residue_of_minus_2_minus_eps": str(x),
        "q": str(q),
        "q_prime": str(q_prime),
        "hilbert_symbol_5_2_plus_eps": symbol,
        "certificate": cert.to_json() if cert else None,
    }
    rep.counts = {"checks": len(checks), "passed": sum(checks.values())}
    return rep.finish(PASS if all(checks.values()) else FAIL)
