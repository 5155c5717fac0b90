"""Command line entry point: ``qosc verify|normal-form|derive|dump-matrix``.

Exit codes: 0 pass, 1 fail, 2 error (bad input, missing file, unknown suite).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import latex
from . import quantumgroup as qg
from .calculus import D_ALPHABET, SECTIONS, X_ALPHABET, XI_ALPHABET, generate_calculus
from .freealg import AlphabetError, NCPoly, format_ncpoly
from .parser import ParseError, parse, parse_scalar
from .report import ERROR, PASS, VerificationReport, to_json, to_text
from .rewrite import FuelExhausted, RewriteSystem, orient_relations
from .rmatrix import RMatrix, build_omega, build_omega_inverse
from .scalar import VARS, Scalar, SubstitutionError, format_scalar
from .suites import EXTRA_SUITES, SUITES, SuiteConfig, run_suite

EXIT = {PASS: 0, "fail": 1, ERROR: 2}
MATRIX_BUILDERS = {"omega": build_omega, "omega-inv": build_omega_inverse}


class UsageError(Exception):
    pass


def parse_bindings(items: Sequence[str]) -> Dict[str, Scalar]:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in VARS:
            raise UsageError(f"invalid binding {item!r}; expected one of {', '.join(VARS)} as k=v")
        try:
            out[key] = parse_scalar(value)
        except ParseError as exc:
            raise UsageError(f"invalid binding {item!r}: {exc}") from None
    return out


def _systems(bindings) -> Dict[str, callable]:
    def calc(key, sections=None, alphabet=None):
        def build():
            pres = generate_calculus(MATRIX_BUILDERS[key](), key)
            if bindings:
                pres = pres.substitute(bindings)
            return pres.system if sections is None else pres.subsystem(sections, alphabet)
        return build

    return {
        "xx": calc("omega", ("xx",), X_ALPHABET),
        "xixi": calc("omega", ("xixi",), XI_ALPHABET),
        "dd": calc("omega", ("dd",), D_ALPHABET),
        "calculus-omega": calc("omega"),
        "calculus-omega-inv": calc("omega-inv"),
        "rtt": lambda: qg.default_rtt_system(bindings or None),
        "rtt-dinv": lambda: qg.localized_dinv(bindings=bindings or None).system,
        "subgroup": lambda: qg.subgroup_localization(bindings or None).system,
    }


SYSTEM_NAMES = ("xx", "xixi", "dd", "calculus-omega", "calculus-omega-inv", "rtt", "rtt-dinv", "subgroup")


def _emit_report(report: VerificationReport, fmt: str, timings: bool) -> str:
    if fmt == "json":
        return to_json(report, timings=timings)
    if fmt == "latex":
        return latex.report(report)
    return to_text(report)


def _rules(system: RewriteSystem):
    return [(NCPoly.from_word(r.lhs, system.alphabet), r.rhs) for r in system.rules]


def _emit_relations(groups: Dict[str, RewriteSystem], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({name: [f"{format_ncpoly(l)} = {format_ncpoly(r)}" for l, r in _rules(s)]
                           for name, s in groups.items()}, indent=2)
    if fmt == "latex":
        return "\n\n".join(f"% {name}\n{latex.relations(_rules(s))}" for name, s in groups.items())
    blocks = []
    for name, s in groups.items():
        lines = [f"# {name}"] + [f"{format_ncpoly(l)} = {format_ncpoly(r)}" for l, r in _rules(s)]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def _emit_matrix(m: RMatrix, fmt: str) -> str:
    if fmt == "json":
        return m.to_json()
    if fmt == "latex":
        return latex.matrix(m.dense())
    rows = [[format_scalar(v) for v in row] for row in m.dense()]
    width = max(len(v) for row in rows for v in row)
    return "\n".join("  ".join(v.rjust(width) for v in row) for row in rows)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--substitute", action="append", default=[], metavar="K=V",
                        help="specialise a parameter, e.g. q=u^2 (repeatable)")
    common.add_argument("--format", choices=("text", "json", "latex"), default="text")
    common.add_argument("--fuel", type=int, default=None, help="rewrite-step budget per normal form")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-degree", type=int, default=4)

    p = argparse.ArgumentParser(prog="qosc", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES) + list(EXTRA_SUITES) + ["all"])
    v.add_argument("--fixture", type=Path, default=None, help="RTT fixture file (rtt suite)")
    v.add_argument("--timings", action="store_true", help="keep elapsed_ms in JSON output")

    n = sub.add_parser("normal-form", parents=[common], help="reduce an expression")
    n.add_argument("expr")
    n.add_argument("--system", choices=SYSTEM_NAMES, default="calculus-omega")

    d = sub.add_parser("derive", parents=[common], help="print generated relation sets")
    d.add_argument("what", choices=("calculus", "rtt"))
    d.add_argument("--matrix", choices=tuple(MATRIX_BUILDERS), default="omega")

    m = sub.add_parser("dump-matrix", parents=[common], help="print Omega or its inverse")
    m.add_argument("matrix", choices=tuple(MATRIX_BUILDERS))
    return p


def _run(args) -> int:
    bindings = parse_bindings(args.substitute)
    if args.command == "verify":
        cfg = SuiteConfig(args.suite, bindings, args.fuel, args.seed, args.max_degree, args.fixture)
        report = run_suite(cfg)
        print(_emit_report(report, args.format, args.timings))
        return EXIT[report.status]
    if args.command == "normal-form":
        system = _systems(bindings)[args.system]()
        if args.fuel:
            system = system.with_fuel(args.fuel)
        p = parse(args.expr, system.alphabet)
        if bindings:
            p = p.substitute(bindings)
        nf = system.normal_form(p)
        if args.format == "json":
            print(json.dumps({"system": args.system, "input": format_ncpoly(p), "normal_form": format_ncpoly(nf)}))
        elif args.format == "latex":
            print(latex.poly(nf))
        else:
            print(format_ncpoly(nf))
        return 0
    if args.command == "derive":
        c = MATRIX_BUILDERS[args.matrix]()
        if args.what == "rtt":
            s = qg.rtt_system(c)
            groups = {f"R_tt from {args.matrix}": s.substitute(bindings) if bindings else s}
        else:
            pres = generate_calculus(c, args.matrix)
            if bindings:
                pres = pres.substitute(bindings)
            groups = {}
            for sec in SECTIONS:
                s = orient_relations(pres.relations[sec], name=sec) if pres.relations[sec] else None
                if s is not None:
                    groups[sec] = s
        print(_emit_relations(groups, args.format))
        return 0
    if args.command == "dump-matrix":
        m = MATRIX_BUILDERS[args.matrix]()
        print(_emit_matrix(m.substitute(bindings) if bindings else m, args.format))
        return 0
    raise UsageError(f"unknown command {args.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (UsageError, ParseError, AlphabetError, SubstitutionError, FuelExhausted, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
