import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittclass.fields import QQ, QuadraticField
from wittclass.witt import (
    WittExpression,
    local_anisotropy_at_inert_prime,
    not_in_2I_certificate,
    pfister2,
    replay_four_torsion,
    steinberg_checks,
    verify_steinberg_relation,
)

small = st.integers(-40, 40).filter(bool)


def test_demo_forms_anisotropic_at_5(Q3, eps):
    q = WittExpression.form(Q3, [Q3(1), -(2 + eps), Q3(-5), 10 + 5 * eps])
    qp = WittExpression.form(Q3, [Q3(-1), -(2 + eps), Q3(-5), 10 + 5 * eps])
    assert local_anisotropy_at_inert_prime(q, 5).anisotropic
    assert local_anisotropy_at_inert_prime(qp, 5).anisotropic
    assert local_anisotropy_at_inert_prime(
        WittExpression.form(Q3, [Q3(1), Q3(-1)]), 5
    ).isotropic


def test_certificate_issued(Q3, eps):
    q = pfister2(2 + eps, 5, field=Q3)
    cert = not_in_2I_certificate(q, 5)
    assert cert is not None
    data = cert.to_json()
    assert data["q_at_p"] == data["q_prime_at_p"] == "anisotropic"
    assert len(data["chain"]) == 5


def test_certificate_withheld(Q3):
    assert (
        not_in_2I_certificate(WittExpression.form(Q3, [Q3(1), Q3(1), Q3(3), Q3(3)]), 5)
        is None
    )
    assert (
        not_in_2I_certificate(
            WittExpression.form(Q3, [Q3(1), Q3(-1), Q3(2), Q3(-2)]), 5
        )
        is None
    )


def test_certificate_needs_inert_prime_and_dim4(Q3):
    with pytest.raises(ValueError):
        not_in_2I_certificate(WittExpression.form(Q3, [Q3(1), Q3(2)]), 5)
    with pytest.raises(ValueError):
        local_anisotropy_at_inert_prime(WittExpression.form(Q3, [Q3(1), Q3(2)]), 7)


def test_four_torsion_examples(Q3, eps):
    t = replay_four_torsion(Q3, 1)
    assert t.valid and "2<1,1> = 0" in t.conclusion
    assert replay_four_torsion(Q3, eps).valid
    with pytest.raises(ValueError):
        replay_four_torsion(QQ, 1)


def test_four_torsion_other_fields():
    for d in (-3, -2, -11):
        K = QuadraticField(d)
        rng = random.Random(d)
        for _ in range(3):
            assert replay_four_torsion(K, K.random_element(rng, 5, nonzero=True)).valid


def test_steinberg_examples():
    assert verify_steinberg_relation(QQ, 2, 3, 5)
    assert steinberg_checks(QQ, 1, 7, 2)["unit"]
    assert steinberg_checks(QQ, 2, 3, 1)["minus"]


@given(small, small, small)
def test_steinberg_over_Q(s, t, r):
    assert all(steinberg_checks(QQ, s, t, r).values())


def test_steinberg_over_quadratic_field(Q3):
    rng = random.Random(4)
    for _ in range(30):
        s, t, r = (Q3.random_element(rng, 4, nonzero=True) for _ in range(3))
        assert verify_steinberg_relation(Q3, s, t, r)
