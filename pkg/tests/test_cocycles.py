import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittclass.cocycles import (
    CocycleKind,
    commuting_pair,
    corrected_cocycle,
    equicommutativity_scan,
    evaluate,
    is_cocycle,
    lift,
    moore_cocycle,
    moore_psl_cocycle,
    nekovar_n,
    random_element,
    verify_prop52,
    verify_thm53,
    witt_cocycle,
)
from wittclass.fields import QQ, flipped_positive, parse_field, positivity_convention
from wittclass.sl2 import (
    Commutation,
    Mat2,
    ProjMat,
    bruhat_decompose,
    build_anticommuting_pair,
    commutation_type,
    g1,
    h_elem,
    identity,
    w_elem,
)
from wittclass.witt import (
    WittExpression,
    is_witt_zero,
    pfister2,
    witt_equal,
)

ALL_KINDS = [k.value for k in CocycleKind]
FIELDS = ["Q", "Q(i)", "Q(sqrt,-3)", "Q(sqrt,5)", "Fp(7)", "Fp2(3)"]


def rank1(K, *pairs):
    return WittExpression(K, [(K(c), m) for c, m in pairs])


def eq(a, b):
    return witt_equal(a, b).equal


# values -------------------------------------------------------------------------


def test_witt_cocycle_examples(Q3):
    I = identity(QQ)
    L = Mat2(QQ, 1, 0, 1, 1)
    assert witt_cocycle(I, I) == WittExpression(QQ)
    assert witt_cocycle(L, L) == rank1(QQ, (-2, 1))
    a, b, p = build_anticommuting_pair(Q3, 5)
    assert witt_cocycle(a, b) == rank1(Q3, (p.eta, 1))
    assert witt_cocycle(b, a) == rank1(Q3, (-p.eta, 1))


def test_witt_cocycle_sign_invariant():
    rng = random.Random(0)
    for _ in range(50):
        A, B = random_element(QQ, rng), random_element(QQ, rng)
        assert witt_cocycle(A, B) == witt_cocycle(-A, B) == witt_cocycle(A, -B)


def test_moore_examples():
    assert moore_cocycle(g1(QQ, 0, 2), g1(QQ, 0, 3)) == pfister2(2, 3)
    assert moore_cocycle(w_elem(QQ, 1), w_elem(QQ, 1)) == rank1(QQ, (1, -4))
    rng = random.Random(1)
    for _ in range(30):
        assert is_witt_zero(moore_cocycle(identity(QQ), random_element(QQ, rng))).equal


def test_nekovar_examples():
    assert nekovar_n(identity(QQ)) == WittExpression(QQ)
    assert nekovar_n(g1(QQ, 0, -1)) == rank1(QQ, (1, 1), (-1, -1))
    assert nekovar_n(w_elem(QQ, 2)) == rank1(QQ, (2, -1))


def test_corrected_examples():
    I = identity(QQ)
    for kind in ("corrected-sl2", "corrected-psl2"):
        assert is_witt_zero(corrected_cocycle(kind, I, I)).equal
    A, B = g1(QQ, 0, 2), g1(QQ, 0, 3)
    val = corrected_cocycle("corrected-sl2", A, B)
    assert val == rank1(QQ, (1, 1), (2, -1), (3, -1), (6, 1))
    assert eq(val, moore_cocycle(A, B))


def test_sign_change_bookkeeping():
    """When the sigma-positive lifts multiply to a negative matrix M, the
    correction n(M) - n(-M) is exactly -2<t> with t the Bruhat parameter of M."""
    rng = random.Random(5)
    seen = 0
    for _ in range(400):
        x, y = random_element(QQ, rng, psl=True), random_element(QQ, rng, psl=True)
        M = lift(x) * lift(y)
        if M == lift(M):
            continue
        seen += 1
        t = bruhat_decompose(M).t
        assert eq(nekovar_n(M) - nekovar_n(-M), rank1(QQ, (t, -2)))
        assert eq(corrected_cocycle("corrected-psl2", x, y), moore_psl_cocycle(x, y))
    assert seen > 5


@pytest.mark.parametrize("field", FIELDS)
def test_normalized(field):
    K = parse_field(field)
    rng = random.Random(3)
    I = identity(K)
    for kind in ALL_KINDS:
        psl = CocycleKind.parse(kind).is_psl
        for _ in range(10):
            g = random_element(K, rng, psl=psl)
            e = ProjMat(I) if psl else I
            assert is_witt_zero(evaluate(kind, e, g)).equal
            assert is_witt_zero(evaluate(kind, g, e)).equal


def test_flipped_convention_keeps_cocycle_identity():
    with positivity_convention(flipped_positive):
        for field in ("Q", "Q(sqrt,-3)"):
            r = is_cocycle("corrected-psl2", field, 200, seed=6)
            assert r.counts["violations"] == 0
            assert verify_thm53(field, 100, seed=6).status == "pass"


# campaigns ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "kind", ["witt-psl2", "moore", "corrected-sl2", "corrected-psl2", "witt-sl2"]
)
def test_cocycle_identity_over_Q(kind):
    r = is_cocycle(kind, "Q", 1000, seed=2)
    assert r.status == "pass", r.data


@pytest.mark.parametrize("field", ["Q(i)", "Q(sqrt,-3)", "Fp(7)", "Fp2(3)"])
@pytest.mark.parametrize("kind", ["witt-psl2", "corrected-psl2", "moore"])
def test_cocycle_identity_other_fields(field, kind):
    r = is_cocycle(kind, field, 150, seed=4)
    assert r.counts["violations"] == 0


def _corrupted(x, y):
    """Witt cocycle plus <2> whenever the first argument is upper triangular."""
    val = witt_cocycle(x, y)
    A = x.rep if isinstance(x, ProjMat) else x
    if not A.a21 and not A.is_scalar_pm1():
        val = val + rank1(A.field, (2, 1))
    return val


def test_corrupted_table_is_caught():
    r = is_cocycle("witt-psl2", "Q", 300, seed=0, cocycle=_corrupted)
    assert r.status == "fail" and r.counts["violations"] > 0
    v = r.data["violations"][0]
    assert not is_witt_zero(v["defect"]).equal


def test_equicommutativity_trichotomy():
    assert (
        equicommutativity_scan("witt-psl2", "Q", samples=200, seed=1).status == "pass"
    )
    assert (
        equicommutativity_scan("witt-psl2", "Q(i)", samples=200, seed=1).status
        == "pass"
    )
    r = equicommutativity_scan("witt-psl2", "Q(sqrt,-3)", samples=200, seed=1)
    assert r.status == "counterexample"
    K = parse_field("Q(sqrt,-3)")
    d = r.data
    assert not d["minus_one_is_square"]
    x, y = d["x"], d["y"]
    assert commutation_type(x.rep, y.rep) is Commutation.ANTICOMMUTE
    cxy, cyx = evaluate("witt-psl2", x, y), evaluate("witt-psl2", y, x)
    assert cxy == d["c(x,y)"] and cyx == d["c(y,x)"]
    assert witt_equal(cxy, -cyx).equal  # <t> versus <-t>
    assert witt_equal(cxy, cyx).not_equal
    assert cxy.dim == 1 and K.is_square(-cxy.entries()[0] / cyx.entries()[0]) is True


def test_plus_commuting_scan_on_sl2_kinds():
    for kind in ("moore", "corrected-sl2", "witt-sl2"):
        r = equicommutativity_scan(
            kind, "Q(sqrt,-3)", mode="plus_commuting", samples=100, seed=2
        )
        assert r.status == "pass", kind
    with pytest.raises(ValueError):
        equicommutativity_scan("moore", "Q", mode="psl_commuting")


@given(
    st.sampled_from(["Q", "Q(i)", "Q(sqrt,-3)", "Fp(5)"]),
    st.integers(0, 10**6),
    st.booleans(),
)
def test_commuting_sampler(field, seed, psl):
    K = parse_field(field)
    A, B = commuting_pair(K, random.Random(seed), 4, psl)
    assert A.is_sl2() and B.is_sl2()
    rel = commutation_type(A, B)
    assert rel is Commutation.COMMUTE or (psl and rel is Commutation.ANTICOMMUTE)


def test_correction_matches_moore():
    A, B = g1(QQ, 0, 2), g1(QQ, 0, 3)
    assert eq(corrected_cocycle("corrected-sl2", A, B), moore_cocycle(A, B))
    I = identity(QQ)
    assert eq(corrected_cocycle("corrected-sl2", I, I), moore_cocycle(I, I))
    assert verify_prop52("Q", 500, seed=7).status == "pass"
    assert verify_prop52("Q(sqrt,-3)", 200, seed=7).status == "pass"


@pytest.mark.parametrize("field", FIELDS)
def test_psl_correction_sampled(field):
    r = verify_thm53(field, 200, seed=11)
    assert r.status == "pass", r.data
    assert r.counts["sign_change"] > 0


def test_campaigns_are_deterministic():
    a = is_cocycle("moore", "Q", 50, seed=3).to_json()
    b = is_cocycle("moore", "Q", 50, seed=3).to_json()
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b


def test_unknown_kind():
    with pytest.raises(ValueError):
        CocycleKind.parse("euler")


def test_h_minus_one_is_hyperbolic_plane():
    from wittclass.cocycles import hyperbolic_plane

    assert hyperbolic_plane(QQ) == rank1(QQ, (1, 2))
    assert nekovar_n(h_elem(QQ, -1)) == rank1(QQ, (1, 1), (-1, -1))
