"""The two differential calculi on the deformed oscillator algebra.

Generators: variables ``x1..x3``, one-forms ``xi1..xi3`` (odd) and
derivatives ``d1..d3``.  Everything is generated from a braiding matrix C:

* ``x^k xi^l = C^{kl}_{mn} xi^m x^n``
* ``xi^k xi^l = -C^{kl}_{mn} xi^m xi^n`` (row-reduced to six relations)
* ``d_k xi^l = K^{lm}_{kn} xi^n d_m`` with ``K = C^{-1}``
* ``d_l x^k = delta^k_l + C^{km}_{ln} x^n d_m``
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

from .freealg import Alphabet, NCPoly, Word, add_into
from .parser import load_relations
from .report import VerificationReport
from .rewrite import RewriteSystem, orient_relations, row_reduce
from .rmatrix import PAIRS, RMatrix
from .scalar import ONE, Q, S, U, Scalar

X_NAMES = ("x1", "x2", "x3")
XI_NAMES = ("xi1", "xi2", "xi3")
D_NAMES = ("d1", "d2", "d3")

# largest letter first; normal words read xi-block, x-block, d-block
MIXED_ORDER = ("d1", "d2", "d3", "x1", "x2", "x3", "xi2", "xi1", "xi3")
MIXED = Alphabet.build(XI_NAMES + X_NAMES + D_NAMES, MIXED_ORDER, odd=XI_NAMES)
FORMS = Alphabet.build(XI_NAMES + X_NAMES, [n for n in MIXED_ORDER if not n.startswith("d")], odd=XI_NAMES)
X_ALPHABET = Alphabet.build(X_NAMES)
XI_ALPHABET = Alphabet.build(XI_NAMES, ("xi2", "xi1", "xi3"), odd=XI_NAMES)
D_ALPHABET = Alphabet.build(D_NAMES)

SECTIONS = ("xx", "xixi", "dd", "xxi", "dxi", "xd")
FIXTURE_SECTIONS = ("xxi", "dxi", "xd")


class FixtureError(LookupError):
    pass


def _g(name: str, alphabet: Alphabet = MIXED) -> NCPoly:
    return alphabet.gen(name)


def x_relations(alphabet: Alphabet = MIXED) -> List[NCPoly]:
    """The three defining relations of the deformed Weyl-Heisenberg algebra."""
    x1, x2, x3 = (_g(n, alphabet) for n in X_NAMES)
    return [
        x1 * x2 - Q * x2 * x1 - S * x3 * x3,
        x1 * x3 - U * x3 * x1,
        x2 * x3 - U.inverse() * x3 * x2,
    ]


def printed_dd_relations(alphabet: Alphabet = MIXED) -> List[NCPoly]:
    """Derivative relations in the form they are usually typeset.

    Their coefficient vectors are the (-1)-eigenvectors of C, but read against
    ``d_m d_n`` they clash with the d/x rules (see :func:`dd_relations`).
    """
    d1, d2, d3 = (_g(n, alphabet) for n in D_NAMES)
    return [
        d1 * d2 - U**2 / Q**2 * d2 * d1,
        d1 * d3 - U / Q * d3 * d1,
        d2 * d3 - Q / U * d3 * d2,
    ]


def _word(*names: str) -> Word:
    return MIXED.word(*names)


def xixi_relations(c: RMatrix) -> List[NCPoly]:
    """``xi^k xi^l + C^{kl}_{mn} xi^m xi^n`` for all k, l, reduced to a basis."""
    rows = []
    for k, l in PAIRS:
        terms: Dict[Word, Scalar] = {_word(f"xi{k}", f"xi{l}"): ONE}
        for m, n in PAIRS:
            v = c.c(k, l, m, n)
            if v:
                add_into(terms, {_word(f"xi{m}", f"xi{n}"): v})
        rows.append(NCPoly(terms, MIXED))
    return row_reduce(rows)


def dd_eigenvectors(c: RMatrix) -> List[List[Scalar]]:
    """Basis of column vectors v with ``C v = -v``, indexed by pairs (m, n)."""
    from .rmatrix import SMatrix

    return (c.transpose() + SMatrix.identity(9)).nullspace_left()


def dd_relations(c: RMatrix) -> List[NCPoly]:
    """Derivative relations ``v^{mn} d_n d_m = 0`` for every v with ``C v = -v``.

    Pairing v with the reversed word is what makes ``d_a d_b x^k`` reduce
    consistently through the d/x rules (the degree-one terms cancel exactly
    when the flipped vector is a (-1)-eigenvector of C).
    """
    rows = []
    for v in dd_eigenvectors(c):
        rows.append(NCPoly({_word(f"d{n}", f"d{m}"): v[i] for i, (m, n) in enumerate(PAIRS)}, MIXED))
    return row_reduce(rows)


def xxi_relations(c: RMatrix) -> List[NCPoly]:
    out = []
    for k, l in PAIRS:
        terms = {_word(f"x{k}", f"xi{l}"): ONE}
        for m, n in PAIRS:
            v = c.c(k, l, m, n)
            if v:
                terms[_word(f"xi{m}", f"x{n}")] = -v
        out.append(NCPoly(terms, MIXED))
    return out


def dxi_relations(k_matrix: RMatrix) -> List[NCPoly]:
    out = []
    for k, l in PAIRS:
        terms: Dict[Word, Scalar] = {_word(f"d{k}", f"xi{l}"): ONE}
        for m in (1, 2, 3):
            for n in (1, 2, 3):
                v = k_matrix.c(l, m, k, n)
                if v:
                    add_into(terms, {_word(f"xi{n}", f"d{m}"): -v})
        out.append(NCPoly(terms, MIXED))
    return out


def xd_relations(c: RMatrix) -> List[NCPoly]:
    out = []
    for l in (1, 2, 3):
        for k in (1, 2, 3):
            terms: Dict[Word, Scalar] = {_word(f"d{l}", f"x{k}"): ONE}
            if k == l:
                terms[()] = -ONE
            for m in (1, 2, 3):
                for n in (1, 2, 3):
                    v = c.c(k, m, l, n)
                    if v:
                        add_into(terms, {_word(f"x{n}", f"d{m}"): -v})
            out.append(NCPoly(terms, MIXED))
    return out


@dataclass
class CalculusPresentation:
    c_matrix: RMatrix
    relations: Dict[str, List[NCPoly]] = field(default_factory=dict)
    label: str = ""

    @cached_property
    def system(self) -> RewriteSystem:
        rels = [r for name in SECTIONS for r in self.relations[name]]
        return orient_relations(rels, MIXED, name=f"calculus[{self.label}]" if self.label else "calculus")

    def rules(self, section: str) -> Dict[Word, NCPoly]:
        """Oriented rules of one relation set, keyed by their head word."""
        sys_ = orient_relations(self.relations[section], MIXED)
        return {r.lhs: r.rhs for r in sys_.rules}

    def subsystem(self, sections: Sequence[str], alphabet: Alphabet = MIXED) -> RewriteSystem:
        rels = [r for name in sections for r in self.relations[name]]
        if alphabet is not MIXED:
            rels = [_restrict(r, alphabet) for r in rels]
        return orient_relations(rels, alphabet, name="+".join(sections))

    def substitute(self, bindings) -> "CalculusPresentation":
        rels = {k: [r.substitute(bindings) for r in v] for k, v in self.relations.items()}
        return CalculusPresentation(self.c_matrix.substitute(bindings), rels, self.label)


def _restrict(p: NCPoly, alphabet: Alphabet) -> NCPoly:
    return p.embed(alphabet) if p.alphabet != alphabet else p


def generate_calculus(c: RMatrix, label: str = "") -> CalculusPresentation:
    """All relation sets of the calculus attached to ``c``."""
    k = c.inverse()
    rels = {
        "xx": x_relations(),
        "xixi": xixi_relations(c),
        "dd": dd_relations(c),
        "xxi": xxi_relations(c),
        "dxi": dxi_relations(k),
        "xd": xd_relations(c),
    }
    return CalculusPresentation(c, rels, label)


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------


def fixture_path(name: str, directory: Path | None = None) -> Path:
    if directory is not None:
        return Path(directory) / f"{name}.txt"
    return Path(str(resources.files("qosc") / "fixtures" / f"{name}.txt"))


def read_fixture(name: str, alphabet: Alphabet, directory: Path | None = None) -> List[NCPoly]:
    """Relations of a fixture file as ``lhs - rhs`` polynomials."""
    path = fixture_path(name, directory)
    if not path.is_file():
        raise FixtureError(f"unknown fixture {name!r} ({path})")
    out = []
    for lhs, rhs, _ in load_relations(path.read_text(), alphabet):
        out.append(lhs if rhs is None else lhs - rhs)
    return out


def compare_rule_sets(generated: Dict[Word, NCPoly], expected: Dict[Word, NCPoly],
                      alphabet: Alphabet, report: VerificationReport, label: str) -> None:
    """One check per expected row, plus one for rows only on the generated side."""
    for lhs in sorted(expected, key=alphabet.word_key, reverse=True):
        name = f"{label}: {alphabet.format_word(lhs)}"
        with report.timed() as slot:
            slot["name"] = name
            got = generated.get(lhs)
            if got is None:
                slot["witness"] = f"row missing from generated set; fixture has {expected[lhs]}"
            elif got != expected[lhs]:
                diff = got - expected[lhs]
                slot["witness"] = diff
                slot["detail"] = f"generated {alphabet.format_word(lhs)} = {got}; fixture = {expected[lhs]}"
            else:
                slot["ok"] = True
    extra = [w for w in generated if w not in expected]
    with report.timed() as slot:
        slot["name"] = f"{label}: no unmatched generated rows"
        slot["ok"] = not extra
        if extra:
            slot["witness"] = ", ".join(alphabet.format_word(w) for w in extra)


def compare_with_fixture(generated: CalculusPresentation, fixture_name: str,
                         directory: Path | None = None, suite: str = "calculus",
                         bindings=None) -> VerificationReport:
    """Row-by-row comparison against ``<fixture_name>_{xxi,dxi,xd}.txt``.

    ``bindings`` specialises the fixture rows; ``generated`` should already
    be specialised the same way.
    """
    report = VerificationReport(suite)
    for section in FIXTURE_SECTIONS:
        rels = read_fixture(f"{fixture_name}_{section}", MIXED, directory)
        if bindings:
            rels = [r.substitute(bindings) for r in rels]
        expected = {r.lhs: r.rhs for r in orient_relations(rels, MIXED).rules}
        compare_rule_sets(generated.rules(section), expected, MIXED, report,
                          f"{generated.label or 'generated'} vs {fixture_name}_{section}")
    return report


# ---------------------------------------------------------------------------
# exterior derivative and consistency
# ---------------------------------------------------------------------------

_D_OF = {MIXED.letter(f"x{i}"): MIXED.letter(f"xi{i}") for i in (1, 2, 3)}
_XI = {MIXED.letter(n) for n in XI_NAMES}
_DER = {MIXED.letter(n) for n in D_NAMES}


class DerivativeLetterError(ValueError):
    pass


def apply_d(p: NCPoly) -> NCPoly:
    """Exterior derivative with ``d x^i = xi^i``, ``d xi^i = 0`` and graded Leibniz."""
    if p.alphabet != MIXED:
        p = p.embed(MIXED)
    out: Dict[Word, Scalar] = {}
    par = MIXED.parity
    for w, c in p.terms.items():
        sign = 1
        for i, a in enumerate(w):
            if a in _DER:
                raise DerivativeLetterError(f"d is undefined on derivatives ({MIXED.format_word(w)})")
            if a in _D_OF:
                add_into(out, {w[:i] + (_D_OF[a],) + w[i + 1:]: c if sign > 0 else -c})
            if par[a]:
                sign = -sign
    return NCPoly._raw(out, MIXED)


def verify_partial_consistency(pres: CalculusPresentation, suite: str = "consistency") -> VerificationReport:
    """``d_i * r`` reduces to zero for every x-relation r and i = 1, 2, 3."""
    report = VerificationReport(suite)
    system = pres.system
    for i in (1, 2, 3):
        d = _g(f"d{i}")
        for j, r in enumerate(pres.relations["xx"], 1):
            with report.timed() as slot:
                slot["name"] = f"{pres.label}: d{i} * R_xx[{j}]"
                ok, nf = system.reduces_to_zero(d * r)
                slot["ok"], slot["witness"] = ok, None if ok else nf
    return report


def verify_d_of_relations(pres: CalculusPresentation, suite: str = "consistency") -> VerificationReport:
    """``d(r)`` lies in the ideal for every x-relation r."""
    report = VerificationReport(suite)
    system = pres.system
    for j, r in enumerate(pres.relations["xx"], 1):
        with report.timed() as slot:
            slot["name"] = f"{pres.label}: d(R_xx[{j}])"
            ok, nf = system.reduces_to_zero(apply_d(r))
            slot["ok"], slot["witness"] = ok, None if ok else nf
    return report


def forms_words(max_degree: int) -> Iterable[Word]:
    import itertools

    letters = [MIXED.letter(n) for n in X_NAMES + XI_NAMES]
    for deg in range(1, max_degree + 1):
        yield from itertools.product(letters, repeat=deg)


def verify_d_squared(samples: Iterable[NCPoly], system: RewriteSystem | None = None,
                     suite: str = "d-squared", label: str = "") -> VerificationReport:
    """``d(d(p))`` reduces to zero for each sample (modulo ``system`` if given)."""
    report = VerificationReport(suite)
    bad = []
    count = 0
    with report.timed() as slot:
        slot["name"] = f"{label + ': ' if label else ''}d^2 = 0"
        for p in samples:
            count += 1
            dd = apply_d(apply_d(p))
            nf = system.normal_form(dd) if system is not None else dd
            if not nf.is_zero():
                bad.append((p, nf))
        slot["ok"] = not bad
        slot["witness"] = bad[0][1] if bad else None
        slot["detail"] = f"{count} samples"
    return report
