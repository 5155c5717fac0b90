"""Acceptance criteria 1-11, one test per criterion.

Each test runs the suites behind the criterion, enforces the time bound and
records a PASS/FAIL line that is printed in the terminal summary.
"""

import time

import pytest

from qosc.suites import SuiteConfig, run_suite

from conftest import ACCEPTANCE_LINES

CRITERIA = [
    (1, "Yang-Baxter for Omega and Omega^-1", ("yang-baxter",), 5),
    (2, "eigenstructure and Hecke relation", ("eigenspaces",), 2),
    (3, "coefficient identities", ("constraints",), 1),
    (4, "calculus tables match transcriptions", ("calculus",), 5),
    (5, "consistency and d^2 = 0", ("consistency", "d-squared"), 30),
    (6, "normal-form uniqueness", ("uniqueness",), 120),
    (7, "RTT table and ideal equality", ("rtt",), 60),
    (8, "determinant, antipode, D^-1 commutation", ("determinant",), 120),
    (9, "Hopf structure and star", ("hopf", "star"), 180),
    (10, "coaction invariance", ("coaction",), 180),
    (11, "special cases", ("subgroup", "special-case", "tprime"), 60),
]


@pytest.mark.parametrize("number,title,suites,bound", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number, title, suites, bound):
    t0 = time.perf_counter()
    failures = []
    total = 0
    for name in suites:
        report = run_suite(SuiteConfig(name))
        total += len(report.checks)
        failures += [f"{name}: {c.name} -> {c.witness or c.detail}" for c in report.failures()]
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < bound
    line = (f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: "
            f"{total - len(failures)}/{total} checks, {elapsed:.2f} s (bound {bound} s)")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, "\n".join(failures)
    assert elapsed < bound
