"""LaTeX rendering of scalars, words, relation sets and reports."""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .freealg import NCPoly
from .report import VerificationReport
from .rewrite import RewriteSystem
from .scalar import MultiPoly, Scalar, format_poly

_LETTER = [
    (re.compile(r"^xi(\d)$"), r"\\xi^{\1}"),
    (re.compile(r"^x(\d)$"), r"x^{\1}"),
    (re.compile(r"^d(\d)$"), r"\\partial_{\1}"),
    (re.compile(r"^bt(\d)(\d)$"), r"\\bar t^{\1}_{\2}"),
    (re.compile(r"^t(\d)(\d)$"), r"t^{\1}_{\2}"),
    (re.compile(r"^Dinv$"), r"D^{-1}"),
    (re.compile(r"^t33inv$"), r"(t^{3}_{3})^{-1}"),
]


def letter(name: str) -> str:
    for pat, rep in _LETTER:
        if pat.match(name):
            return pat.sub(rep, name)
    return name


def _poly(p: MultiPoly) -> str:
    text = format_poly(p)
    text = re.sub(r"\^(\d+)", r"^{\1}", text)
    return text.replace("*", " ")


def scalar(c: Scalar) -> str:
    neg = c.sign() < 0
    a = -c if neg else c
    num, den = _poly(a.num), _poly(a.den)
    body = num if den == "1" else rf"\frac{{{num}}}{{{den}}}"
    return ("-" if neg else "") + body


def word(p: NCPoly, w) -> str:
    names = [p.alphabet.generators[a].display for a in w]
    out, i = [], 0
    while i < len(names):
        j = i
        while j < len(names) and names[j] == names[i]:
            j += 1
        base = letter(names[i])
        out.append(base if j - i == 1 else f"({base})^{{{j - i}}}")
        i = j
    return " ".join(out) if out else "1"


def poly(p: NCPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k, w in enumerate(p.sorted_words()):
        c = p.terms[w]
        neg = c.sign() < 0
        a = -c if neg else c
        coef = "" if a.is_one() and w else scalar(a)
        if coef and w and len(a.num.terms) > 1 and a.den.is_one():
            coef = f"({coef})"
        body = f"{coef}\\,{word(p, w)}" if coef and w else (coef or word(p, w))
        sign = "-" if neg else "+"
        parts.append((sign if k else ("-" if neg else "")) + (" " if k else "") + body)
    return " ".join(parts)


def relations(rules: Sequence[tuple], columns: int = 1) -> str:
    """``rules`` is a sequence of ``(lhs, rhs)`` NCPolys, laid out like a printed table."""
    cells = [f"{poly(lhs)} &=& {poly(rhs)}" for lhs, rhs in rules]
    spec = "rcl" * columns
    rows = []
    for i in range(0, len(cells), columns):
        rows.append(" & ".join(cells[i:i + columns]) + r" \\")
    return "\\begin{array}{" + spec + "}\n" + "\n".join(rows) + "\n\\end{array}"


def system(s: RewriteSystem, columns: int = 1) -> str:
    rules = [(NCPoly.from_word(r.lhs, s.alphabet), r.rhs) for r in s.rules]
    return relations(rules, columns)


def report(r: VerificationReport) -> str:
    def esc(text: str) -> str:
        return re.sub(r"([_&%#^$])", r"\\\1", text)

    lines = [r"\begin{tabular}{ll}", rf"\multicolumn{{2}}{{l}}{{suite \texttt{{{esc(r.suite)}}}: {r.status}}} \\"]
    for c in r.checks:
        lines.append(rf"{c.status} & {esc(c.name)} \\")
    lines.append(r"\end{tabular}")
    return "\n".join(lines)


def matrix(entries: Iterable[Iterable[Scalar]]) -> str:
    rows = [" & ".join(scalar(v) if not v.is_zero() else "0" for v in row) + r" \\" for row in entries]
    return "\\left(\\begin{array}{" + "c" * 9 + "}\n" + "\n".join(rows) + "\n\\end{array}\\right)"
