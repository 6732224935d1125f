import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from wittclass.fields import (
    QQ,
    PrimeField,
    flipped_positive,
    parse_field,
    positivity_convention,
)
from wittclass.sl2 import (
    G1,
    G2,
    AntiCommutingParams,
    Commutation,
    Mat2,
    ProjMat,
    bruhat_compose,
    bruhat_decompose,
    build_anticommuting_pair,
    commutation_type,
    g1,
    g2,
    h_elem,
    identity,
    matrix_from_json,
    normalize_anticommuting_pair,
    psl_canonicalize,
    random_sl2,
    sigma,
    w_elem,
    x_elem,
)

FIELDS = ["Q", "Q(i)", "Q(sqrt,-3)", "Q(sqrt,2)", "Fp(7)", "Fp2(3)"]


def M(*xs, K=QQ):
    return Mat2(K, *[K(x) for x in xs])


def test_rejects_non_sl2():
    with pytest.raises(ValueError):
        bruhat_decompose(M(1, 1, 1, 1))


def test_bruhat_examples():
    assert bruhat_decompose(identity(QQ)) == G1(0, 1)
    assert bruhat_decompose(M(0, 1, -1, 0)) == G2(0, 1, 0)
    assert bruhat_decompose(M(1, 5, 0, 1)) == G1(5, 1)
    assert g1(QQ, 0, 2) == h_elem(QQ, 2)
    assert g2(QQ, 3, 2, -1) == x_elem(QQ, 3) * w_elem(QQ, 2) * x_elem(QQ, -1)


@given(st.sampled_from(FIELDS), st.integers(0, 10**6))
def test_bruhat_round_trip(field, seed):
    K = parse_field(field)
    A = random_sl2(K, random.Random(seed), 6, 4)
    assert A.is_sl2()
    assert bruhat_compose(K, bruhat_decompose(A)) == A


def test_commutation_examples(Q3):
    a, b, _ = build_anticommuting_pair(Q3, 1)
    assert commutation_type(identity(QQ), M(2, 1, 1, 1)) is Commutation.COMMUTE
    assert commutation_type(a, b) is Commutation.ANTICOMMUTE
    assert commutation_type(M(1, 1, 0, 1), h_elem(QQ, 2)) is Commutation.NEITHER


def test_sigma_examples():
    I = identity(QQ)
    assert sigma(I) == 1 and sigma(-I) == -1
    assert sigma(M(0, -1, 1, 0)) == -1
    with positivity_convention(flipped_positive):
        assert sigma(I) == 1
        assert sigma(h_elem(QQ, 2)) == -1


@given(st.sampled_from(FIELDS), st.integers(0, 10**6))
def test_sigma_is_odd(field, seed):
    K = parse_field(field)
    A = random_sl2(K, random.Random(seed), 5, 3)
    assert sigma(-A) == -sigma(A)


def test_psl_canonicalize():
    I = identity(QQ)
    assert psl_canonicalize(I).rep == I
    assert psl_canonicalize(-I).rep == I
    assert psl_canonicalize(-I * h_elem(QQ, 2)).rep == h_elem(QQ, 2)
    assert ProjMat(-I) == ProjMat(I) and hash(ProjMat(-I)) == hash(ProjMat(I))
    assert (ProjMat(h_elem(QQ, 2)) * ProjMat(-h_elem(QQ, mpq(1, 2)))).is_identity()


def test_anticommuting_pair_eta_one(Q3, eps):
    a, b, p = build_anticommuting_pair(Q3, 1)
    assert a == M(eps, eps * eps, eps * eps, -eps, K=Q3)
    assert b == w_elem(Q3, 1)  # equals -(0 -1; 1 0): the same element of PSL2
    assert ProjMat(b) == ProjMat(M(0, -1, 1, 0, K=Q3))
    assert p.t == 1 and p.eta == 1


def test_anticommuting_pair_eta_five(Q3, eps):
    a, b, p = build_anticommuting_pair(Q3, 5)
    assert (p.gamma, p.delta, p.t) == (eps, 5 * eps * eps, Q3(mpq(1, 5)))
    assert p.gamma**2 + (p.t * p.delta) ** 2 == -1
    assert a * b == -(b * a) and a.is_sl2() and b.is_sl2()


def test_no_anticommuting_pairs_over_Q():
    with pytest.raises(ValueError):
        build_anticommuting_pair(QQ, 1)
    with pytest.raises(ValueError):
        AntiCommutingParams(mpq(1), mpq(1), mpq(1))


@pytest.mark.parametrize("field", ["Q(sqrt,-3)", "Q(sqrt,-2)", "Fp(7)", "Fp2(3)"])
def test_normalization_round_trip(field):
    K = parse_field(field)
    rng = random.Random(1)
    for _ in range(15):
        eta = K.random_element(rng, 5, nonzero=True)
        a, b, params = build_anticommuting_pair(K, eta)
        d0, p0 = normalize_anticommuting_pair(a, b)
        assert d0 == identity(K) and p0 == params
        C = random_sl2(K, rng, 4, 3)
        ca, cb = C * a * C.inverse(), C * b * C.inverse()
        d, p = normalize_anticommuting_pair(ca, cb)
        di = d.inverse()
        assert d.is_sl2()
        assert d * cb * di == w_elem(K, p.t)
        assert d * ca * di == Mat2(K, p.gamma, p.t * p.t * p.delta, p.delta, -p.gamma)


def test_normalization_rejects_commuting_pair():
    with pytest.raises(ValueError):
        normalize_anticommuting_pair(h_elem(QQ, 2), h_elem(QQ, 3))


def test_matrix_json_round_trip(Q3, eps):
    A = x_elem(Q3, eps) * h_elem(Q3, mpq(2, 3) + eps) * w_elem(Q3, 5)
    assert matrix_from_json(A.to_json(), Q3) == A


def test_group_laws_finite_field():
    K = PrimeField(5)
    rng = random.Random(2)
    for _ in range(20):
        A, B = random_sl2(K, rng), random_sl2(K, rng)
        assert (A * B).inverse() == B.inverse() * A.inverse()
        assert (A * A.inverse()).is_identity()
        assert A**3 == A * A * A and A**-2 == (A * A).inverse()
