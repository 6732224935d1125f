"""Acceptance suite: the twelve criteria at their stated sizes.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""

import itertools
import random
import time

import pytest
from oracles import SEARCH_BOUND, isotropic_vector, random_small_forms

from wittclass.cocycles import (
    CocycleKind,
    equicommutativity_scan,
    evaluate,
    hyperbolic_plane,
    is_cocycle,
    verify_prop52,
    verify_thm53,
)
from wittclass.demos import remark44_demo
from wittclass.fields import QQ, flipped_positive, parse_field, positivity_convention
from wittclass.sl2 import (
    AntiCommutingParams,
    anticommuting_from_params,
    build_anticommuting_pair,
    normalize_anticommuting_pair,
    random_sl2,
)
from wittclass.surfaces import (
    ExtContext,
    commutator_formula_rhs,
    eval_closed_surface,
    ext_commutator,
    ext_lift,
    milnor_wood_audit,
    psi_image,
    sample_closed_rep,
    torus_realize,
)
from wittclass.witt import (
    WittExpression,
    anisotropic_dimension,
    dyadic_closed_form,
    dyadic_search,
    ideal_membership,
    is_witt_zero,
    replay_four_torsion,
    steinberg_checks,
    witt_equal,
)

RESULTS = {}
KINDS = ["witt-psl2", "moore", "corrected-sl2", "corrected-psl2"]
SUPPORTED_FIELDS = [
    "Q",
    "Q(i)",
    "Q(sqrt,-3)",
    "Q(sqrt,-2)",
    "Q(sqrt,2)",
    "Q(sqrt,5)",
    "Fp(5)",
    "Fp(7)",
    "Fp2(3)",
]
Q3 = parse_field("Q(sqrt,-3)")
Qi = parse_field("Q(i)")


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def form(K, *xs):
    return WittExpression.form(K, [K(x) for x in xs])


def test_criterion_01_cocycle_identity():
    notes, ok = [], True
    t0 = time.perf_counter()
    for kind in KINDS:
        r = is_cocycle(kind, "Q", 10_000, seed=1)
        ok &= r.counts["violations"] == 0 and r.counts["unknown"] == 0
        notes.append(f"Q/{kind}: {r.counts['violations']} violations")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    notes.append(f"Q total {elapsed:.1f}s")
    for field in ("Q(i)", "Q(sqrt,-3)"):
        for kind in KINDS:
            r = is_cocycle(kind, field, 1000, seed=1)
            rate = r.counts["unknown"] / 1000
            ok &= r.counts["violations"] == 0 and rate <= 0.05
            notes.append(
                f"{field}/{kind}: not_equal={r.counts['violations']} unknown={rate:.1%}"
            )
    record(1, ok, "; ".join(notes))


def test_criterion_02_correction_matches_moore():
    r = verify_prop52("Q", 10_000, seed=2)
    ok = r.counts["failures"] == 0 and r.counts["unknown"] == 0
    record(
        2,
        ok,
        f"10^4 SL2(Q) pairs, failures={r.counts['failures']} unknown={r.counts['unknown']}",
    )


def test_criterion_03_equicommutativity():
    rq = equicommutativity_scan("witt-psl2", "Q", samples=500, seed=3)
    ri = equicommutativity_scan("witt-psl2", "Q(i)", samples=500, seed=3)
    r3 = equicommutativity_scan("witt-psl2", "Q(sqrt,-3)", samples=500, seed=3)
    ok = rq.status == "pass" and ri.status == "pass" and r3.status == "counterexample"
    detail = f"Q {rq.status}, Q(i) {ri.status}, Q(sqrt,-3) {r3.status}"
    if r3.status == "counterexample":
        d = r3.data
        x, y = d["x"], d["y"]
        cxy, cyx = evaluate("witt-psl2", x, y), evaluate("witt-psl2", y, x)
        _, params = normalize_anticommuting_pair(x.rep, y.rep)
        gd = form(Q3, params.eta)
        ok &= cxy == d["c(x,y)"] and cyx == d["c(y,x)"]
        ok &= witt_equal(cxy, gd).equal and witt_equal(cyx, form(Q3, -params.eta)).equal
        ok &= witt_equal(cxy, cyx).not_equal and not d["minus_one_is_square"]
        detail += f": c(x,y)={cxy} c(y,x)={cyx}, certified by '{d['certificate']}'"
    record(3, ok, detail)


def test_criterion_04_psl_values_in_I2_plus():
    notes, ok = [], True
    for field in SUPPORTED_FIELDS:
        r = verify_thm53(field, 1000, seed=4)
        ok &= r.status == "pass"
        notes.append(f"{field} {r.status}")
    record(4, ok, "1000 PSL2 pairs each: " + ", ".join(notes))


def test_criterion_05_commutator_formulas():
    rng = random.Random(5)
    ok = True
    kinds = ["moore", "corrected-sl2", "corrected-psl2"]
    for _ in range(100):
        eta = Q3.random_element(rng, 9, nonzero=True)
        a, b, p = build_anticommuting_pair(Q3, eta)
        target = hyperbolic_plane(Q3) - 2 * form(Q3, 1) + 2 * form(Q3, p.eta)
        for kind in kinds:
            c = ExtContext(CocycleKind.parse(kind), Q3)
            lhs = psi_image(ext_commutator(ext_lift(c, a), ext_lift(c, b)))
            rhs = commutator_formula_rhs(a, b, kind)
            ok &= (
                witt_equal(lhs, rhs).equal
                and witt_equal(rhs, target).equal
                and witt_equal(lhs, target).equal
            )
    degenerate = 0
    i = Qi.gen
    for _ in range(50):
        t = Qi.random_element(rng, 9, nonzero=True)
        params = (
            AntiCommutingParams(i, Qi(0), t)
            if rng.random() < 0.5
            else AntiCommutingParams(Qi(0), i / t, t)
        )
        a, b = anticommuting_from_params(Qi, params)
        C = random_sl2(Qi, rng, 4, 2)
        a, b = C * a * C.inverse(), C * b * C.inverse()
        for kind in kinds:
            c = ExtContext(CocycleKind.parse(kind), Qi)
            val = psi_image(ext_commutator(ext_lift(c, a), ext_lift(c, b)))
            ok &= (
                witt_equal(val, hyperbolic_plane(Qi)).equal and is_witt_zero(val).equal
            )
        degenerate += 1
    record(
        5,
        ok,
        f"100 eta over Q(sqrt,-3) x {len(kinds)} cocycles pairwise equal; {degenerate} degenerate Q(i) pairs give <1,1> = 0",
    )


def test_criterion_06_demo():
    r = remark44_demo()
    checks = r.data["checks"]
    ok = r.status == "pass" and len(checks) == 5 and all(checks.values())
    record(6, ok, ", ".join(f"{k}={v}" for k, v in checks.items()))


def test_criterion_07_torus_realization():
    rng = random.Random(7)
    good = 0
    for _ in range(50):
        eta = Q3.random_element(rng, 9, nonzero=True)
        rep, val = torus_realize(Q3, eta)
        rep.check()
        good += rep.group == "PSL2" and witt_equal(val, form(Q3, eta, eta)).equal
    record(7, good == 50, f"{good}/50 classes equal <eta,eta>")


def test_criterion_08_milnor_wood():
    g1 = milnor_wood_audit(QQ, 1, 1000, seed=8)
    g2 = milnor_wood_audit(QQ, 2, 500, seed=8)
    ok = g1.status == "pass" and g1.data["max_norm"] == 0 and g1.counts["nonzero"] == 0
    ok &= (
        g2.status == "pass"
        and g2.data["max_norm"] <= 6
        and g2.data["max_abs_signature"] <= 4
    )
    record(
        8,
        ok,
        f"genus 1: 1000 reps, max norm {g1.data['max_norm']}; genus 2: 500 reps, max norm "
        f"{g2.data['max_norm']} (<= 6), max |signature| {g2.data['max_abs_signature']} (<= 4), "
        f"histogram {g2.data['norm_histogram']}",
    )


def test_criterion_09_four_torsion():
    rng = random.Random(9)
    valid = 0
    for _ in range(20):
        t = replay_four_torsion(Q3, Q3.random_element(rng, 9, nonzero=True))
        valid += t.valid and "2<1,1> = 0" in t.conclusion
    record(9, valid == 20, f"{valid}/20 transcripts valid")


def test_criterion_10_steinberg():
    rng = random.Random(10)
    bad = 0
    for _ in range(1000):
        s, t, r = (QQ.random_element(rng, 12, nonzero=True) for _ in range(3))
        bad += not all(steinberg_checks(QQ, s, t, r).values())
    record(10, bad == 0, f"1000 triples over Q, {bad} failures")


def test_criterion_11_oracles():
    forms = random_small_forms(500, seed=11)
    disagree = []
    isotropic = 0
    for coeffs in forms:
        d = anisotropic_dimension(form(QQ, *coeffs))
        vec = isotropic_vector(coeffs)
        iso = d < len(coeffs)
        isotropic += iso
        if iso != (vec is not None):
            disagree.append(coeffs)
    classes = [1, 3, 5, 7, 2, 6, 10, 14]
    dy_bad = [
        (a, b)
        for a, b in itertools.product(classes, repeat=2)
        if dyadic_closed_form(a, b) != dyadic_search(a, b)
    ]
    ok = not disagree and not dy_bad
    record(
        11,
        ok,
        f"500 forms ({isotropic} isotropic), {len(disagree)} disagreements with search bound {SEARCH_BOUND}; "
        f"dyadic 64 pairs, {len(dy_bad)} disagreements",
    )


def test_criterion_12_sign_independence():
    notes, ok = [], True
    for field in ("Q", "Q(i)", "Q(sqrt,-3)"):
        K = parse_field(field)
        rng = random.Random(12)
        same = 0
        for _ in range(100):
            rep, _ = sample_closed_rep(K, rng, rng.choice([1, 2, 3]), "PSL2")
            base = eval_closed_surface(rep, "corrected-psl2")
            with positivity_convention(flipped_positive):
                flipped = eval_closed_surface(rep, "corrected-psl2")
            same += base == flipped and ideal_membership(base).in_I2_plus
        ok &= same == 100
        notes.append(f"{field} {same}/100")
    record(12, ok, "identical values: " + ", ".join(notes))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
