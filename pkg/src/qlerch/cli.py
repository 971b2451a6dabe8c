"""Command-line front end.

Subcommands:
    expand    evaluate a DSL expression to a truncated series (or a certified
              rational value in numeric mode)
    verify    check one catalog identity at explicit or random bindings
    suite     run the whole verification suite
    residues  run the Richardson residue checks for one or all pole families
    list      print the identity catalog

Exit status: 0 all checks pass, 1 any check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .dsl import eval_ast, parse, parse_monomial, parse_rational
from .errors import QLerchError
from .identities import CATALOG
from .residues import run_residue_family
from .verify import (
    RESIDUE_FAMILIES,
    Specialization,
    SuiteConfig,
    check_identity,
    random_specialization,
    run_suite,
)


def _parse_bindings(pairs, numeric: bool) -> dict:
    out = {}
    for pair in pairs or ():
        name, _, value = pair.partition("=")
        if not _ or not name:
            raise SystemExit(_usage(f"malformed binding {pair!r}; use NAME=VALUE"))
        out[name] = parse_rational(value) if numeric else parse_monomial(value)
    return out


def _usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _frac(text: str) -> Fraction:
    return Fraction(text)


def _cmd_expand(args) -> int:
    ast = parse(args.expr)
    if args.numeric:
        bindings = _parse_bindings(args.bind, numeric=True)
        ball = eval_ast(ast, bindings, "numeric", q=args.q, eps=args.eps)
        if args.format == "json":
            print(json.dumps({
                "value": f"{ball.val.numerator}/{ball.val.denominator}",
                "bound": f"{ball.err.numerator}/{ball.err.denominator}",
            }))
        else:
            print(f"value = {ball.val}")
            print(f"bound = {ball.err}")
        return 0
    bindings = _parse_bindings(args.bind, numeric=False)
    series = eval_ast(ast, bindings, "formal", order=args.order)
    if args.format == "json":
        print(json.dumps({str(e): str(c) for e, c in series.items()}))
    else:
        print(series)
    return 0


def _cmd_verify(args) -> int:
    spec = CATALOG.get(args.id)
    if spec is None:
        return _usage(f"unknown identity id {args.id!r}; see `list`")
    if args.numeric:
        bindings = _parse_bindings(args.bind, numeric=True)
        s = Specialization("numeric", bindings, q=args.q, eps=args.eps)
    else:
        bindings = _parse_bindings(args.bind, numeric=False)
        if bindings:
            missing = set(spec.params) - set(bindings)
            if missing:
                return _usage(f"missing bindings for {sorted(missing)}")
            s = Specialization("formal", bindings, order=args.order or spec.default_order)
        else:
            rng = random.Random(args.seed)
            s = random_specialization(
                spec, rng, Fraction(args.order) if args.order else spec.default_order
            )
    rep = check_identity(spec, s)
    print(json.dumps(rep.to_json_dict(), indent=2))
    expected = spec.expected
    if rep.status == expected:
        return 0
    return 1


def _cmd_suite(args) -> int:
    if args.config:
        config = SuiteConfig.from_file(args.config)
    else:
        config = SuiteConfig()
    if args.seed is not None:
        config.seed = args.seed
    if args.jobs is not None:
        config.parallelism = args.jobs
    report = run_suite(config, with_residues=not args.no_residues)
    counts = {"pass": 0, "fail": 0, "error": 0}
    for r in report.reports:
        counts[r.status] += 1
        if r.status != "pass" or args.verbose:
            print(f"{r.status:5s} {r.id} [{r.case}] {r.message}")
    for r in report.residue_reports:
        counts[r.status] += 1
        if r.status != "pass" or args.verbose:
            print(f"{r.status:5s} {r.label} diff={float(r.diff):.3g} {r.message}")
    bad_h = [(l, s) for l, s in report.h_sums if s > Fraction(1, 10**20)]
    for label, s in bad_h:
        print(f"fail  residue-sum {label} |sum|={float(s):.3g}")
    print(
        f"{counts['pass']} passed, {counts['fail']} failed, "
        f"{counts['error']} errors, {len(report.h_sums)} residue sums "
        f"({len(bad_h)} nonzero)"
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json())
        print(f"report written to {args.out}")
    return 0 if not report.failures else 1


def _parse_n_range(text: str):
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    return [int(text)]


def _cmd_residues(args) -> int:
    families = [args.family] if args.family else list(RESIDUE_FAMILIES)
    ns = _parse_n_range(args.n) if args.n else range(-2, 4)
    bad = 0
    for family in families:
        ks = (-1, 0, 1, 2) if family == "prop21" else None
        reports, h_sums = run_residue_family(
            family, args.q, args.y, args.z, ns, ks=ks, eps=args.eps
        )
        for r in reports:
            mark = "pass" if r.status == "pass" else r.status
            if r.status != "pass" or args.verbose:
                print(f"{mark:5s} {r.label} diff={float(r.diff):.3g} {r.message}")
            bad += r.status != "pass"
        for label, s in h_sums:
            ok = s <= Fraction(1, 10**20)
            if not ok or args.verbose:
                print(f"{'pass' if ok else 'fail':5s} residue-sum {label} "
                      f"|sum|={float(s):.3g}")
            bad += not ok
        print(f"{family}: {len(reports)} lemma checks, {len(h_sums)} residue sums")
    return 1 if bad else 0


def _cmd_list(args) -> int:
    for name in sorted(CATALOG):
        spec = CATALOG[name]
        tag = " [negative control]" if spec.expected == "fail" else ""
        print(f"{name:18s} ({', '.join(spec.params)})  {spec.citation}{tag}")
    print("residue families: " + ", ".join(RESIDUE_FAMILIES))
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="qlerch", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand a DSL expression")
    p.add_argument("expr")
    p.add_argument("--bind", action="append", metavar="NAME=VAL")
    p.add_argument("--order", type=Fraction, default=Fraction(10))
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--q", type=_frac)
    p.add_argument("--eps", type=_frac, default=Fraction(1, 10**30))
    p.set_defaults(fn=_cmd_expand)

    p = sub.add_parser("verify", help="check one identity")
    p.add_argument("--id", required=True)
    p.add_argument("--bind", action="append", metavar="NAME=VAL")
    p.add_argument("--order", type=Fraction)
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--q", type=_frac)
    p.add_argument("--eps", type=_frac, default=Fraction(1, 10**30))
    p.add_argument("--seed", type=int, default=20160810)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("suite", help="run the verification suite")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", help="write the JSON suite report here")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--no-residues", action="store_true")
    p.set_defaults(fn=_cmd_suite)

    p = sub.add_parser("residues", help="run residue checks")
    p.add_argument("--family", choices=RESIDUE_FAMILIES)
    p.add_argument("--n", help="range like -2..3 or a single integer")
    p.add_argument("--q", type=_frac, default=Fraction(1, 7))
    p.add_argument("--y", type=_frac, default=Fraction(1, 2))
    p.add_argument("--z", type=_frac, default=Fraction(2, 5))
    p.add_argument("--eps", type=_frac, default=Fraction(1, 10**30))
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(fn=_cmd_residues)

    p = sub.add_parser("list", help="print the identity catalog")
    p.set_defaults(fn=_cmd_list)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except QLerchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
