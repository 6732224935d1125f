"""Witt rings of Q, Q(sqrt d) and finite fields."""

from .equality import (
    DEFAULT_BUDGET,
    EqualityVerdict,
    Verdict,
    anisotropic_dimension,
    is_witt_zero,
    rewrite_zero,
    witt_equal,
    witt_norm,
)
from .forms import (
    Membership,
    WittExpression,
    canonical_coefficient,
    ideal_membership,
    parse_form,
    pfister2,
    signature,
    signed_determinant,
)
from .inert import (
    LocalVerdict,
    NotIn2ICertificate,
    local_anisotropy_at_inert_prime,
    not_in_2I_certificate,
)
from .local import (
    Place,
    dyadic_closed_form,
    dyadic_search,
    hilbert_symbol,
    hilbert_symbol_local,
    infinite_places,
    places_over,
)
from .relations import (
    Transcript,
    replay_four_torsion,
    steinberg_checks,
    verify_steinberg_relation,
)

__all__ = [
    "DEFAULT_BUDGET",
    "EqualityVerdict",
    "LocalVerdict",
    "Membership",
    "NotIn2ICertificate",
    "Place",
    "Transcript",
    "Verdict",
    "WittExpression",
    "anisotropic_dimension",
    "canonical_coefficient",
    "dyadic_closed_form",
    "dyadic_search",
    "hilbert_symbol",
    "hilbert_symbol_local",
    "ideal_membership",
    "infinite_places",
    "is_witt_zero",
    "local_anisotropy_at_inert_prime",
    "not_in_2I_certificate",
    "parse_form",
    "pfister2",
    "places_over",
    "replay_four_torsion",
    "rewrite_zero",
    "signature",
    "signed_determinant",
    "steinberg_checks",
    "verify_steinberg_relation",
    "witt_equal",
    "witt_norm",
]
