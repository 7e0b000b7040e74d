"""Command-line front end.

Exit codes: 0 success (a found violation is a success), 1 runtime or input
error, 2 usage error. The matrix command exits 1 when the matrix disagrees
with the expected profiles.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import iterate as it
from .audit import AuditConfig, PairClass, implication_matrix
from .audit.checks import CHECKS, PAIR_CHECKS
from .coupling import CouplingKind, InfeasibleCoupling, couple, martingale_coupling
from .functionals.catalog import get as catalog_entry
from .functionals import evaluate, parse, parse_preference
from .functionals.dsl import ParseError
from .io import InputError, dumps, joint_to_json, load_dist
from .numeric import NumericMode, format_number, to_fraction
from .orders import concave_order_geq

PROPERTIES = tuple(PAIR_CHECKS) + tuple(CHECKS)


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _grid(text: str):
    try:
        return tuple(to_fraction(t) for t in text.split(","))
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divaudit", description="Diversification and risk attitude audits on finite laws.")
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def mode_flag(sp, flag="--mode"):
        sp.add_argument(flag, choices=("exact", "float"), default="exact", help="numeric mode (default exact)")

    sp = sub.add_parser("eval", help="evaluate a functional on a law")
    sp.add_argument("--spec", required=True, help='functional, e.g. "mean - var*abs(2 - var)"')
    sp.add_argument("--dist", required=True, help="law JSON file")
    mode_flag(sp)

    sp = sub.add_parser("order", help="concave-order test X >=_cv Y")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    mode_flag(sp)

    sp = sub.add_parser("couple", help="build a coupling of two laws")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--kind", required=True, choices=[k.value for k in CouplingKind] + ["martingale"])
    sp.add_argument("--out", help="write the joint JSON here instead of stdout")
    mode_flag(sp)

    sp = sub.add_parser("audit", help="search for violations of a property")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--pref", help='preference, e.g. "total(esssup, higher)"')
    src.add_argument("--catalog", help="name of a built-in preference")
    sp.add_argument("--property", required=True, choices=PROPERTIES)
    sp.add_argument("--class", dest="pair_class", help="pair class (diversification properties only)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=500)
    sp.add_argument("--lambdas", type=_grid, help="comma-separated mixing weights (default k/16)")
    sp.add_argument("--format", choices=("json", "table"), default="json")
    mode_flag(sp)

    sp = sub.add_parser("iterate", help="symmetrization trace as JSON lines")
    sp.add_argument("--dist", required=True)
    sp.add_argument("--mode", choices=it.MODES, default=it.ANTIMONOTONIC, help="coupling of the two copies")
    sp.add_argument("--steps", type=int, default=10)
    sp.add_argument("--p", type=_rational, default=Fraction(2))
    mode_flag(sp, "--numeric")

    sp = sub.add_parser("lln", help="antimonotonic iterate against the i.i.d. dyadic average")
    sp.add_argument("--dist", required=True)
    sp.add_argument("--steps", type=int, default=6)
    sp.add_argument("--p", type=_rational, default=Fraction(2))
    mode_flag(sp)

    sp = sub.add_parser("matrix", help="full catalog x property matrix")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=500)
    sp.add_argument("--format", choices=("json", "table"), default="table")
    mode_flag(sp)
    return p


def _mode(name: str) -> NumericMode:
    return NumericMode.from_name(name)


def _fmt(x) -> str:
    return format_number(x)


def _config(args, parser) -> AuditConfig:
    kw = {"seed": args.seed, "budget": args.budget, "mode": _mode(args.mode)}
    if getattr(args, "lambdas", None):
        kw["lambda_grid"] = args.lambdas
    try:
        return AuditConfig(**kw)
    except ValueError as exc:
        parser.error(str(exc))


def _run(args, parser) -> int:
    out = sys.stdout
    if args.command == "eval":
        mode = _mode(args.mode)
        spec = parse(args.spec)
        d = load_dist(args.dist, mode)
        out.write(_fmt(evaluate(spec, d)) + "\n")
        return 0

    if args.command == "order":
        mode = _mode(args.mode)
        v = concave_order_geq(load_dist(args.x, mode), load_dist(args.y, mode))
        line = v.relation
        if v.reason:
            line += f" ({v.reason}" + (f" at {_fmt(v.witness)})" if v.witness is not None else ")")
        out.write(line + "\n")
        return 0

    if args.command == "couple":
        mode = _mode(args.mode)
        dX, dY = load_dist(args.x, mode), load_dist(args.y, mode)
        J = martingale_coupling(dX, dY) if args.kind == "martingale" else couple(args.kind, dX, dY)
        text = dumps(joint_to_json(J)) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
        return 0

    if args.command == "audit":
        cfg = _config(args, parser)
        pref = catalog_entry(args.catalog).preference if args.catalog else parse_preference(args.pref)
        if args.property in PAIR_CHECKS:
            if not args.pair_class:
                parser.error(f"--class is required for {args.property}")
            try:
                cls = PairClass.parse(args.pair_class)
            except ValueError as exc:
                parser.error(str(exc))
            rep = PAIR_CHECKS[args.property](pref, cls, cfg)
        else:
            if args.pair_class:
                parser.error(f"--class does not apply to {args.property}")
            rep = CHECKS[args.property](pref, cfg)
        out.write((dumps(rep.to_json()) if args.format == "json" else rep.table()) + "\n")
        return 0

    if args.command == "iterate":
        d = load_dist(args.dist, _mode(args.numeric))
        trace = it.run_sequence(d, args.mode, args.steps, args.p)
        out.write(trace.json_lines() + "\n")
        return 0

    if args.command == "lln":
        d = load_dist(args.dist, _mode(args.mode))
        for row in it.lln_comparison(d, args.steps, args.p):
            out.write(json.dumps(row) + "\n")
        return 0

    if args.command == "matrix":
        cfg = _config(args, parser)
        rep = implication_matrix(cfg)
        out.write((dumps(rep.to_json()) if args.format == "json" else rep.table()) + "\n")
        if not rep.ok:
            for m in rep.mismatches:
                sys.stderr.write(f"mismatch: {m['preference']} {m['column']}: expected {m['expected']}, found {m['found']}\n")
            return 1
        return 0
    parser.error(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args, parser)
    except (InputError, ParseError, InfeasibleCoupling, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"divaudit: error: {msg}\n")
        return 1
    except (ValueError, ArithmeticError, OSError, RuntimeError) as exc:
        sys.stderr.write(f"divaudit: error: {exc}\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
