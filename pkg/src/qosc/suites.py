"""Named verification suites, one per group of claims, and their runner."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional

from . import quantumgroup as qg
from .calculus import (
    D_ALPHABET,
    MIXED,
    X_ALPHABET,
    XI_ALPHABET,
    FixtureError,
    compare_rule_sets,
    compare_with_fixture,
    forms_words,
    generate_calculus,
    read_fixture,
    verify_d_of_relations,
    verify_d_squared,
    verify_partial_consistency,
)
from .freealg import NCPoly
from .parser import ParseError
from .report import VerificationReport
from .rewrite import FuelExhausted, OrientationError, check_unique_normal_forms, orient_relations
from .rmatrix import (
    PAIRS,
    RMatrix,
    build_omega,
    build_omega_inverse,
    COEFFICIENT_IDENTITIES,
    covector,
    eigenspace_dimension,
    hecke_residual,
    left_eigen_residual,
    yang_baxter_residual,
)
from .scalar import Q, S, U, Scalar, ScalarDivisionError, SubstitutionError, format_scalar


@dataclass
class SuiteConfig:
    name: str
    bindings: Dict[str, Scalar] = field(default_factory=dict)
    fuel: Optional[int] = None
    seed: int = 0
    max_degree: int = 4
    fixture: Optional[Path] = None
    specializations: int = 3


MATRICES = {"omega": ("Omega", build_omega), "omega-inv": ("Omega^-1", build_omega_inverse)}
FIXTURE_PREFIX = {"omega": "R_omega", "omega-inv": "R_omega_inv"}


def _matrices(cfg: SuiteConfig):
    for key, (label, build) in MATRICES.items():
        c = build()
        yield key, label, (c.substitute(cfg.bindings) if cfg.bindings else c)


def random_bindings(rng: random.Random, names=("q", "u", "s")) -> Dict[str, Scalar]:
    """Nonzero rationals with small numerators and denominators."""
    out = {}
    for n in names:
        v = Fraction(0)
        while v == 0:
            v = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        out[n] = Scalar.coerce(v)
    return out


def _specializations(cfg: SuiteConfig) -> List[Dict[str, Scalar]]:
    if cfg.bindings:
        return []
    rng = random.Random(cfg.seed)
    out = []
    while len(out) < cfg.specializations:
        b = random_bindings(rng)
        if (b["q"] - b["u"] ** 2).is_zero():
            continue
        out.append(b)
    return out


def _fmt(b: Mapping[str, Scalar]) -> str:
    return ", ".join(f"{k}={format_scalar(v)}" for k, v in sorted(b.items()))


# ---------------------------------------------------------------------------
# R-matrix suites
# ---------------------------------------------------------------------------


def suite_yang_baxter(cfg: SuiteConfig) -> VerificationReport:
    report = VerificationReport("yang-baxter")
    for _, label, c in _matrices(cfg):
        with report.timed() as slot:
            slot["name"] = f"YBE for {label}"
            res = yang_baxter_residual(c)
            slot["ok"] = res.is_zero()
            if not res.is_zero():
                slot["witness"] = f"{sum(1 for _ in res.items())} nonzero entries"
    for b in _specializations(cfg):
        for key, (label, build) in MATRICES.items():
            with report.timed() as slot:
                slot["name"] = f"YBE for {label} at {_fmt(b)}"
                slot["ok"] = yang_baxter_residual(build().substitute(b)).is_zero()
    return report


def _xx_covectors():
    return [covector({(1, 2): 1, (2, 1): -Q, (3, 3): -S}),
            covector({(1, 3): 1, (3, 1): -U}),
            covector({(2, 3): 1, (3, 2): -U.inverse()})]


def _xixi_covectors(c: RMatrix):
    from .calculus import xixi_relations

    out = []
    for rel in xixi_relations(c):
        f = [Scalar.coerce(0)] * 9
        for w, v in rel.terms.items():
            k, l = (int(MIXED.generators[a].display[2]) for a in w)
            f[PAIRS.index((k, l))] = v
        out.append(f)
    return out


def suite_eigenspaces(cfg: SuiteConfig) -> VerificationReport:
    report = VerificationReport("eigenspaces")
    b = cfg.bindings
    lam = {"omega": Q / U**2, "omega-inv": U**2 / Q}
    generic = {"omega": build_omega(), "omega-inv": build_omega_inverse()}
    for key, label, c in _matrices(cfg):
        mu = lam[key].substitute(b) if b else lam[key]
        for i, f in enumerate(_xx_covectors(), 1):
            f = [v.substitute(b) for v in f] if b else f
            with report.timed() as slot:
                slot["name"] = f"{label}: R_xx covector {i} has eigenvalue -1"
                res = left_eigen_residual(f, c, -1)
                slot["ok"] = all(v.is_zero() for v in res)
        for i, f in enumerate(_xixi_covectors(generic[key]), 1):
            f = [v.substitute(b) for v in f] if b else f
            with report.timed() as slot:
                slot["name"] = f"{label}: R_xixi covector {i} has eigenvalue {format_scalar(mu)}"
                res = left_eigen_residual(f, c, mu)
                slot["ok"] = all(v.is_zero() for v in res)
        with report.timed() as slot:
            slot["name"] = f"{label}: (C + 1)(C - {format_scalar(mu)}) = 0"
            slot["ok"] = hecke_residual(c, mu).is_zero()
        with report.timed() as slot:
            dims = (eigenspace_dimension(c, -1), eigenspace_dimension(c, mu))
            slot["name"] = f"{label}: eigenspace dimensions (-1, {format_scalar(mu)}) = (3, 6)"
            slot["ok"] = dims == (3, 6)
            slot["detail"] = f"found {dims}"
    return report


def suite_constraints(cfg: SuiteConfig) -> VerificationReport:
    """The identities hold generically; with bindings, their residuals are specialised."""
    report = VerificationReport("constraints")
    for key, (label, build) in MATRICES.items():
        c = build()
        for name, residual in COEFFICIENT_IDENTITIES:
            with report.timed() as slot:
                slot["name"] = f"{label}: {name}"
                r = residual(c)
                if cfg.bindings:
                    r = r.substitute(cfg.bindings)
                slot["ok"] = r.is_zero()
                slot["witness"] = None if r.is_zero() else f"residual {format_scalar(r)}"
    return report


# ---------------------------------------------------------------------------
# calculus suites
# ---------------------------------------------------------------------------


def _calculi(cfg: SuiteConfig):
    for key, label, _ in _matrices(cfg):
        pres = generate_calculus(MATRICES[key][1](), label)
        yield key, (pres.substitute(cfg.bindings) if cfg.bindings else pres)


def suite_calculus(cfg: SuiteConfig) -> VerificationReport:
    report = VerificationReport("calculus")
    for key, pres in _calculi(cfg):
        report.extend(compare_with_fixture(pres, FIXTURE_PREFIX[key], bindings=cfg.bindings or None))
    # the calculus-independent tables
    pres = next(_calculi(cfg))[1]
    for section, name in (("xx", "R_xx"), ("xixi", "R_xixi"), ("dd", "R_dd")):
        rels = read_fixture(name, MIXED)
        if cfg.bindings:
            rels = [r.substitute(cfg.bindings) for r in rels]
        expected = {r.lhs: r.rhs for r in orient_relations(rels, MIXED).rules}
        compare_rule_sets(pres.rules(section), expected, MIXED, report, f"{pres.label} vs {name}")
    return report


def suite_consistency(cfg: SuiteConfig) -> VerificationReport:
    report = VerificationReport("consistency")
    for _, pres in _calculi(cfg):
        report.extend(verify_partial_consistency(pres))
        report.extend(verify_d_of_relations(pres))
    return report


def suite_d_squared(cfg: SuiteConfig) -> VerificationReport:
    report = VerificationReport("d-squared")
    degree = min(cfg.max_degree, 3)
    for _, pres in _calculi(cfg):
        samples = (NCPoly.from_word(w, MIXED) for w in forms_words(degree))
        report.extend(verify_d_squared(samples, pres.system, label=f"{pres.label}, words of degree <= {degree}"))
    return report


def suite_uniqueness(cfg: SuiteConfig) -> VerificationReport:
    report = VerificationReport("uniqueness")
    pres = next(_calculi(cfg))[1]
    for sections, alphabet in ((("xx",), X_ALPHABET), (("xixi",), XI_ALPHABET), (("dd",), D_ALPHABET)):
        sys_ = pres.subsystem(sections, alphabet)
        if cfg.fuel:
            sys_ = sys_.with_fuel(cfg.fuel)
        report.extend(check_unique_normal_forms(sys_, cfg.max_degree, seed=cfg.seed))
    for _, pres in _calculi(cfg):
        sys_ = pres.system.with_fuel(cfg.fuel) if cfg.fuel else pres.system
        report.extend(check_unique_normal_forms(sys_, cfg.max_degree, seed=cfg.seed))
    t = qg.default_rtt_system(cfg.bindings or None)
    if cfg.fuel:
        t = t.with_fuel(cfg.fuel)
    report.extend(check_unique_normal_forms(t, min(cfg.max_degree, 3), sample_degree=4, samples=200, seed=cfg.seed))
    return report


# ---------------------------------------------------------------------------
# quantum group suites
# ---------------------------------------------------------------------------


def suite_rtt(cfg: SuiteConfig) -> VerificationReport:
    if cfg.fixture is not None:
        path = Path(cfg.fixture)
        if not path.is_file():
            raise FixtureError(f"fixture file not found: {path}")
        return qg.verify_rtt_table(path.stem, path.parent, cfg.bindings or None)
    return qg.verify_rtt_table(bindings=cfg.bindings or None)


def suite_determinant(cfg: SuiteConfig) -> VerificationReport:
    report = qg.verify_D_commutation(bindings=cfg.bindings or None)
    report.extend(qg.verify_inverse(cfg.bindings or None))
    return report


def suite_hopf(cfg: SuiteConfig) -> VerificationReport:
    return qg.verify_hopf_axioms(cfg.bindings or None)


def suite_star(cfg: SuiteConfig) -> VerificationReport:
    return qg.verify_star_closure(bindings=cfg.bindings or None)


def suite_coaction(cfg: SuiteConfig) -> VerificationReport:
    report = VerificationReport("coaction")
    for key, (label, build) in MATRICES.items():
        for sector in qg.COACTION_SECTORS:
            report.extend(qg.verify_coaction_invariance(sector, build(), label, cfg.bindings or None))
    return report


def suite_coaction_derivatives(cfg: SuiteConfig) -> VerificationReport:
    report = VerificationReport("coaction-d")
    for key, (label, build) in MATRICES.items():
        report.extend(qg.verify_derivative_coaction(build(), label, cfg.bindings or None))
    return report


def suite_subgroup(cfg: SuiteConfig) -> VerificationReport:
    return qg.subgroup_constraint_check(cfg.bindings or None)


def suite_special_case(cfg: SuiteConfig) -> VerificationReport:
    report = qg.special_case_q_u2(cfg.bindings or None)
    report.extend(qg.classical_limit_check())
    return report


def suite_tprime(cfg: SuiteConfig) -> VerificationReport:
    return qg.tprime_commutativity_check(cfg.bindings or None, constrained=True)


SUITES: Dict[str, Callable[[SuiteConfig], VerificationReport]] = {
    "yang-baxter": suite_yang_baxter,
    "eigenspaces": suite_eigenspaces,
    "constraints": suite_constraints,
    "calculus": suite_calculus,
    "consistency": suite_consistency,
    "d-squared": suite_d_squared,
    "rtt": suite_rtt,
    "determinant": suite_determinant,
    "hopf": suite_hopf,
    "star": suite_star,
    "coaction": suite_coaction,
    "subgroup": suite_subgroup,
    "special-case": suite_special_case,
    "tprime": suite_tprime,
    "uniqueness": suite_uniqueness,
}
# run on request only, not part of "all"
EXTRA_SUITES = {"coaction-d": suite_coaction_derivatives}

RECOVERABLE = (FixtureError, ParseError, FuelExhausted, OrientationError, SubstitutionError,
               ScalarDivisionError, ArithmeticError, KeyError, ValueError, OSError)


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    """Run one suite (or ``all``); known failures become ``error`` checks."""
    if cfg.name == "all":
        report = VerificationReport("all")
        for name in SUITES:
            sub = run_suite(SuiteConfig(name, cfg.bindings, cfg.fuel, cfg.seed, cfg.max_degree, cfg.fixture,
                                        cfg.specializations))
            report.extend(sub, prefix=f"{name}: ")
        return report
    fn = SUITES.get(cfg.name) or EXTRA_SUITES.get(cfg.name)
    if fn is None:
        report = VerificationReport(cfg.name)
        report.error("suite lookup", f"unknown suite {cfg.name!r}")
        return report
    try:
        report = fn(cfg)
    except RECOVERABLE as exc:
        report = VerificationReport(cfg.name)
        report.error(type(exc).__name__, str(exc))
    report.suite = cfg.name
    return report
