"""Command-line front end. Reports go to stdout (or --out) as JSON, a
one-line summary goes to stderr.

Exit codes: 0 pass, 1 fail or counterexample, 2 usage error, 3 unknown.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .cocycles import (
    CocycleKind,
    equicommutativity_scan,
    is_cocycle,
    verify_prop52,
    verify_thm53,
)
from .demos import remark44_demo
from .fields import parse_field
from .report import FAIL, PASS, UNKNOWN, Report
from .surfaces import SurfaceRep, eval_closed_surface, milnor_wood_audit, torus_realize
from .witt import (
    DEFAULT_BUDGET,
    ideal_membership,
    parse_form,
    signature,
    steinberg_checks,
    witt_equal,
    witt_norm,
)

EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _common(p, samples=1000):
    p.add_argument("--field", default="Q", help="Q, Q(i), Q(sqrt,D), Fp(P), Fp2(P)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="rewrite-engine state budget")
    p.add_argument("--height", type=int, default=5, help="height bound for sampled entries")
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def build_parser():
    ap = argparse.ArgumentParser(prog="wittclass", description="Witt-class computations for SL2 and PSL2.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="sampled verification campaigns")
    v.add_argument("check", choices=["cocycle", "prop52", "thm53", "equicomm", "steinberg"])
    _common(v)
    v.add_argument("--cocycle", default="witt-psl2", help="witt-sl2, witt-psl2, moore, corrected-sl2, corrected-psl2")
    v.add_argument("--mode", default=None, choices=["plus_commuting", "psl_commuting"])

    e = sub.add_parser("eval", help="evaluate a cocycle class on a closed surface representation")
    e.add_argument("rep_file", help="SurfaceRep JSON file ('-' for stdin)")
    e.add_argument("--cocycle", default="corrected-psl2")
    _common(e)

    r = sub.add_parser("realize", help="realise a class on a torus")
    r.add_argument("what", choices=["torus"])
    r.add_argument("--eta", default="1")
    r.add_argument("--cocycle", default="corrected-psl2")
    _common(r)

    a = sub.add_parser("audit", help="Milnor-Wood audit")
    a.add_argument("what", choices=["mw"])
    a.add_argument("--genus", type=int, default=1)
    a.add_argument("--cocycle", default="witt-psl2")
    _common(a)

    d = sub.add_parser("demo", help="worked examples")
    d.add_argument("what", choices=["remark44"])
    d.add_argument("--out")

    w = sub.add_parser("witt", help="Witt-ring queries on form literals such as '<1,-2,-3,6>'")
    w.add_argument("op", choices=["equal", "norm", "membership"])
    w.add_argument("forms", nargs="+")
    _common(w)
    return ap


def _field(args):
    try:
        return parse_field(args.field)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _kind(name):
    try:
        return CocycleKind.parse(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args):
    K = _field(args)
    if args.check == "cocycle":
        return is_cocycle(_kind(args.cocycle), K, args.samples, args.seed, args.height, args.budget)
    if args.check == "prop52":
        return verify_prop52(K, args.samples, args.seed, args.height, args.budget)
    if args.check == "thm53":
        return verify_thm53(K, args.samples, args.seed, args.height, args.budget)
    if args.check == "equicomm":
        kind = _kind(args.cocycle)
        mode = args.mode or ("psl_commuting" if kind.is_psl else "plus_commuting")
        try:
            return equicommutativity_scan(kind, K, mode, args.samples, args.seed, min(args.height, 4), args.budget)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return cmd_steinberg(K, args)


def cmd_steinberg(K, args):
    rng = random.Random(args.seed)
    rep = Report("verify steinberg", {"field": str(K), "samples": args.samples, "seed": args.seed})
    bad = []
    for _ in range(args.samples):
        s, t, r = (K.random_element(rng, args.height, nonzero=True) for _ in range(3))
        res = steinberg_checks(K, s, t, r)
        if not all(res.values()):
            bad.append({"s": K.format(s), "t": K.format(t), "r": K.format(r), "checks": res})
    rep.counts = {"samples": args.samples, "failures": len(bad)}
    rep.data = {"failures": bad[:5]}
    return rep.finish(FAIL if bad else PASS)


def cmd_eval(args):
    try:
        if args.rep_file == "-":
            obj = json.load(sys.stdin)
        else:
            with open(args.rep_file) as fh:
                obj = json.load(fh)
        rep = SurfaceRep.from_json(obj)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read representation: {exc}") from None
    kind = _kind(args.cocycle)
    out = Report("eval", {"cocycle": kind.value, "field": str(rep.field), "genus": rep.genus, "group": rep.group})
    try:
        val = eval_closed_surface(rep, kind)
    except ValueError as exc:
        raise UsageError(f"invalid representation: {exc}") from None
    out.data = {"class": val, "membership": ideal_membership(val).as_dict()}
    if rep.field == parse_field("Q"):
        out.data["witt_norm"] = witt_norm(val)
        out.data["signature"] = signature(val)
    return out.finish(PASS)


def cmd_realize(args):
    K = _field(args)
    try:
        eta = K.parse(args.eta)
        rep, val = torus_realize(K, eta, _kind(args.cocycle))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    from .witt import WittExpression

    target = WittExpression.form(K, [eta, eta])
    v = witt_equal(val, target, budget=args.budget)
    out = Report("realize torus", {"field": str(K), "eta": K.format(eta), "cocycle": args.cocycle})
    out.data = {"representation": rep, "class": val, "expected": target, "verdict": str(v)}
    return out.finish(PASS if v.equal else UNKNOWN if v.unknown else FAIL)


def cmd_audit(args):
    K = _field(args)
    try:
        return milnor_wood_audit(K, args.genus, args.samples, args.seed, _kind(args.cocycle).value, min(args.height, 4))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_witt(args):
    K = _field(args)
    try:
        forms = [parse_form(K, f) for f in args.forms]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Report(f"witt {args.op}", {"field": str(K), "forms": args.forms})
    if args.op == "equal":
        if len(forms) != 2:
            raise UsageError("witt equal takes exactly two forms")
        v = witt_equal(forms[0], forms[1], budget=args.budget)
        out.data = {"verdict": str(v), "method": v.method, "reason": v.reason}
        return out.finish(PASS if v.equal else UNKNOWN if v.unknown else FAIL)
    if len(forms) != 1:
        raise UsageError(f"witt {args.op} takes exactly one form")
    q = forms[0]
    if args.op == "norm":
        try:
            out.data = {"form": q, "witt_norm": witt_norm(q)}
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        out.data = {"form": q, **ideal_membership(q).as_dict()}
    return out.finish(PASS)


def _emit(report, args):
    text = report.dumps()
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(report.summary(), file=sys.stderr)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    handlers = {
        "verify": cmd_verify,
        "eval": cmd_eval,
        "realize": cmd_realize,
        "audit": cmd_audit,
        "demo": lambda a: remark44_demo(),
        "witt": cmd_witt,
    }
    try:
        report = handlers[args.command](args)
    except UsageError as exc:
        print(f"wittclass: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
