"""Run every verification suite and print a one-line summary per suite.

    python3 scripts/run_all_suites.py [--substitute q=u^2] [--json out.json]
"""

import argparse
import json
import time

from qosc.cli import parse_bindings
from qosc.report import to_json
from qosc.suites import EXTRA_SUITES, SUITES, SuiteConfig, run_suite


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--substitute", action="append", default=[])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--optional", action="store_true", help="also run the optional derivative-coaction suite")
    p.add_argument("--json", default=None, help="write all reports to this file")
    args = p.parse_args()
    bindings = parse_bindings(args.substitute)
    names = list(SUITES) + (list(EXTRA_SUITES) if args.optional else [])
    docs = []
    for name in names:
        t0 = time.perf_counter()
        report = run_suite(SuiteConfig(name, bindings, seed=args.seed))
        dt = time.perf_counter() - t0
        bad = report.failures()
        print(f"{name:16s} {report.status:5s} {len(report.checks) - len(bad):4d}/{len(report.checks):<4d} {dt:6.2f} s")
        for c in bad:
            w = c.witness or ""
            print(f"    {c.status}: {c.name}" + (f"  [{w[:100]}{'...' if len(w) > 100 else ''}]" if w else ""))
        docs.append(json.loads(to_json(report, timings=False)))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(docs, fh, indent=2)


if __name__ == "__main__":
    main()
