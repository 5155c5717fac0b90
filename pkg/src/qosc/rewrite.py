"""Oriented rewrite systems on noncommutative polynomials.

A :class:`RewriteSystem` rewrites contiguous subwords ``lhs -> rhs``.  The
fast path (:meth:`RewriteSystem.normal_form`) memoises normal forms word by
word; the traced path follows the documented strategy literally so that the
trace can be replayed.
"""

from __future__ import annotations

import itertools
import random
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .freealg import Alphabet, NCPoly, Word, add_into
from .report import VerificationReport
from .scalar import ONE, Scalar

DEFAULT_FUEL = 10**6


class FuelExhausted(RuntimeError):
    """Too many single-step reductions; likely a non-terminating system."""

    def __init__(self, message: str, trace: Optional["ReductionTrace"] = None):
        super().__init__(message)
        self.trace = trace


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: NCPoly

    def as_relation(self) -> NCPoly:
        """``lhs - rhs`` as a polynomial that should vanish."""
        return NCPoly.from_word(self.lhs, self.rhs.alphabet) - self.rhs

    def format(self) -> str:
        return f"{self.rhs.alphabet.format_word(self.lhs)} = {self.rhs}"


@dataclass
class ReductionTrace:
    """Steps ``(word, position, rule index)`` in application order."""

    steps: List[Tuple[Word, int, int]] = field(default_factory=list)
    result: Optional[NCPoly] = None


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n


class RewriteSystem:
    """Immutable set of rules over an alphabet (the normal-form cache aside)."""

    def __init__(self, alphabet: Alphabet, rules: Sequence[RewriteRule], fuel: int = DEFAULT_FUEL,
                 name: str = ""):
        self.alphabet = alphabet
        self.rules: Tuple[RewriteRule, ...] = tuple(rules)
        self.fuel = fuel
        self.name = name
        self._index: Dict[Word, int] = {}
        for i, r in enumerate(self.rules):
            if r.rhs.alphabet != alphabet:
                raise ValueError(f"rule {r.format()} is over a different alphabet")
            if len(r.lhs) < 1:
                raise ValueError("empty left-hand side")
            if r.lhs in self._index:
                raise ValueError(f"two rules share the left side {alphabet.format_word(r.lhs)}")
            if r.lhs in r.rhs.terms:
                raise ValueError(f"left side reappears on the right in {r.format()}")
            self._index[r.lhs] = i
        self._lengths = sorted({len(r.lhs) for r in self.rules})
        self._rhs = [r.rhs.terms for r in self.rules]
        self._memo: Dict[object, Dict[Word, Dict[Word, Scalar]]] = {}

    # -- construction helpers -------------------------------------------
    def __len__(self) -> int:
        return len(self.rules)

    def with_rules(self, extra: Iterable[RewriteRule], name: str | None = None) -> "RewriteSystem":
        return RewriteSystem(self.alphabet, list(self.rules) + list(extra), self.fuel,
                             self.name if name is None else name)

    def with_fuel(self, fuel: int) -> "RewriteSystem":
        return RewriteSystem(self.alphabet, self.rules, fuel, self.name)

    def embed(self, target: Alphabet, name: str | None = None) -> "RewriteSystem":
        rules = []
        for r in self.rules:
            m = [target.letter(g.display) for g in self.alphabet.generators]
            rules.append(RewriteRule(tuple(m[a] for a in r.lhs), r.rhs.embed(target)))
        return RewriteSystem(target, rules, self.fuel, self.name if name is None else name)

    def substitute(self, bindings, name: str | None = None) -> "RewriteSystem":
        """Specialise parameters in every rule (rules whose rhs vanish stay as ``lhs -> 0``)."""
        rules = [RewriteRule(r.lhs, r.rhs.substitute(bindings)) for r in self.rules]
        return RewriteSystem(self.alphabet, rules, self.fuel, self.name if name is None else name)

    def rule_for(self, lhs: Word) -> Optional[RewriteRule]:
        i = self._index.get(tuple(lhs))
        return None if i is None else self.rules[i]

    def relations(self) -> List[NCPoly]:
        return [r.as_relation() for r in self.rules]

    # -- matching -------------------------------------------------------
    def reducible_positions(self, w: Word) -> List[Tuple[int, int]]:
        out = []
        idx = self._index
        n = len(w)
        for i in range(n):
            for L in self._lengths:
                if i + L > n:
                    break
                r = idx.get(w[i:i + L])
                if r is not None:
                    out.append((i, r))
        return out

    def _first_position(self, w: Word) -> Optional[Tuple[int, int]]:
        idx = self._index
        n = len(w)
        for i in range(n):
            for L in self._lengths:
                if i + L > n:
                    break
                r = idx.get(w[i:i + L])
                if r is not None:
                    return i, r
        return None

    def is_normal(self, w: Word) -> bool:
        return self._first_position(w) is None

    def _apply(self, w: Word, pos: int, ri: int) -> Dict[Word, Scalar]:
        L = len(self.rules[ri].lhs)
        pre, post = w[:pos], w[pos + L:]
        return {pre + v + post: c for v, c in self._rhs[ri].items()}

    # -- normal forms ---------------------------------------------------
    def _choose(self, w: Word, strategy) -> Optional[Tuple[int, int]]:
        if strategy == "leftmost":
            return self._first_position(w)
        pos = self.reducible_positions(w)
        if not pos:
            return None
        if strategy == "rightmost":
            return pos[-1]
        # ("random", seed): deterministic per word
        rng = random.Random(hash((strategy[1], w)))
        return pos[rng.randrange(len(pos))]

    def _nf_word(self, w: Word, strategy, memo, fuel: _Fuel) -> Dict[Word, Scalar]:
        hit = memo.get(w)
        if hit is not None:
            return hit
        choice = self._choose(w, strategy)
        if choice is None:
            res = {w: ONE}
        else:
            fuel.left -= 1
            if fuel.left < 0:
                raise FuelExhausted(f"fuel exhausted while reducing {self.alphabet.format_word(w)}")
            res = {}
            for v, c in self._apply(w, *choice).items():
                add_into(res, self._nf_word(v, strategy, memo, fuel), c)
        memo[w] = res
        return res

    def normal_form(self, p: NCPoly, strategy="leftmost", fuel: int | None = None) -> NCPoly:
        """Fully reduced form of ``p``.

        ``strategy`` selects the redex inside each word: ``"leftmost"``,
        ``"rightmost"`` or ``("random", seed)``.
        """
        if p.alphabet != self.alphabet:
            raise ValueError(f"polynomial over {p.alphabet}, system over {self.alphabet}")
        memo = self._memo.setdefault(strategy, {})
        tank = _Fuel(self.fuel if fuel is None else fuel)
        out: Dict[Word, Scalar] = {}
        limit = sys.getrecursionlimit()
        if limit < 20000:
            sys.setrecursionlimit(20000)
        try:
            for w, c in p.terms.items():
                add_into(out, self._nf_word(w, strategy, memo, tank), c)
        finally:
            sys.setrecursionlimit(limit)
        return NCPoly._raw(out, self.alphabet)

    def normal_form_traced(self, p: NCPoly, fuel: int | None = None) -> ReductionTrace:
        """Reduce the largest reducible word at its leftmost redex, repeatedly."""
        cur = dict(p.terms)
        trace = ReductionTrace()
        left = self.fuel if fuel is None else fuel
        key = self.alphabet.word_key
        while True:
            redexes = [w for w in cur if self._first_position(w) is not None]
            if not redexes:
                break
            w = max(redexes, key=key)
            pos, ri = self._first_position(w)
            left -= 1
            if left < 0:
                trace.result = NCPoly._raw(cur, self.alphabet)
                raise FuelExhausted("fuel exhausted in traced reduction", trace)
            c = cur.pop(w)
            add_into(cur, self._apply(w, pos, ri), c)
            trace.steps.append((w, pos, ri))
        trace.result = NCPoly._raw(cur, self.alphabet)
        return trace

    def replay(self, p: NCPoly, trace: ReductionTrace) -> NCPoly:
        cur = dict(p.terms)
        for w, pos, ri in trace.steps:
            c = cur.pop(w)
            add_into(cur, self._apply(w, pos, ri), c)
        return NCPoly._raw(cur, self.alphabet)

    def reduces_to_zero(self, p: NCPoly) -> Tuple[bool, NCPoly]:
        nf = self.normal_form(p)
        return nf.is_zero(), nf

    def __repr__(self) -> str:
        return f"RewriteSystem({self.name or '?'}, {len(self.rules)} rules over {self.alphabet})"


def normal_form(p: NCPoly, system: RewriteSystem, trace: bool = False):
    """Normal form of ``p``; with ``trace=True`` returns ``(nf, ReductionTrace)``."""
    if trace:
        t = system.normal_form_traced(p)
        return t.result, t
    return system.normal_form(p)


def reduces_to_zero(p: NCPoly, system: RewriteSystem) -> Tuple[bool, NCPoly]:
    """``(True, 0)`` if ``p`` lies in the ideal, else ``(False, witness)``."""
    return system.reduces_to_zero(p)


# ---------------------------------------------------------------------------
# orientation and linear algebra on relations
# ---------------------------------------------------------------------------


def orient_relations(relations: Sequence[NCPoly], alphabet: Alphabet | None = None,
                     leading: Callable[[NCPoly], Word] | None = None, name: str = "",
                     fuel: int = DEFAULT_FUEL) -> RewriteSystem:
    """Turn ``lhs - rhs = 0`` relations into rules headed by their largest word.

    ``leading`` overrides how the head word is picked.
    """
    if not relations and alphabet is None:
        raise ValueError("no relations and no alphabet")
    alphabet = alphabet or relations[0].alphabet
    rules = []
    for r in relations:
        if r.alphabet != alphabet:
            r = r.embed(alphabet)
        if r.is_zero():
            continue
        if leading is None:
            key = alphabet.word_key
            ranked = sorted(r.terms, key=key, reverse=True)
            if len(ranked) > 1 and key(ranked[0]) == key(ranked[1]):
                raise OrientationError(f"relation {r} has two tied maximal words")
            head = ranked[0]
        else:
            head = leading(r)
        c = r.terms[head]
        inv = -c.inverse()
        rhs = {w: v * inv for w, v in r.terms.items() if w != head}
        rules.append(RewriteRule(head, NCPoly._raw(rhs, alphabet)))
    return RewriteSystem(alphabet, rules, fuel, name)


def row_reduce(relations: Sequence[NCPoly], key: Callable[[Word], object] | None = None) -> List[NCPoly]:
    """Reduced echelon basis of the span of ``relations``.

    Each returned relation has a distinct pivot word (the ``key``-largest word
    in it) with coefficient 1, and no other relation mentions that pivot.
    """
    if not relations:
        return []
    alphabet = relations[0].alphabet
    key = key or alphabet.word_key
    rows: Dict[Word, Dict[Word, Scalar]] = {}
    for r in relations:
        row = dict(r.terms)
        for piv, prow in rows.items():
            c = row.get(piv)
            if c:
                add_into(row, prow, -c)
        if not row:
            continue
        piv = max(row, key=key)
        inv = row[piv].inverse()
        row = {w: v * inv for w, v in row.items()}
        for other in rows.values():
            c = other.get(piv)
            if c:
                add_into(other, row, -c)
        rows[piv] = row
    out = [NCPoly._raw(row, alphabet) for row in rows.values()]
    out.sort(key=lambda p: key(max(p.terms, key=key)))
    return out


# ---------------------------------------------------------------------------
# empirical uniqueness of normal forms
# ---------------------------------------------------------------------------


def _strategies(n: int, seed: int) -> List[object]:
    base: List[object] = ["leftmost", "rightmost"]
    k = 0
    while len(base) < n:
        base.append(("random", seed * 1000 + k))
        k += 1
    return base[:n]


def all_words(alphabet: Alphabet, degree: int) -> Iterable[Word]:
    return itertools.product(range(len(alphabet)), repeat=degree)


def check_unique_normal_forms(system: RewriteSystem, max_degree: int, strategies: int = 3,
                              sample_degree: int | None = None, samples: int = 200,
                              seed: int = 0, suite: str = "uniqueness") -> VerificationReport:
    """Reduce every word up to ``max_degree`` under several redex-selection orders.

    With ``sample_degree`` set, additionally reduce ``samples`` seeded random
    words of that degree.  Fuel exhaustion is reported per word.
    """
    if max_degree < 1 or strategies < 2:
        raise ValueError("need max_degree >= 1 and at least two strategies")
    report = VerificationReport(suite)
    strats = _strategies(strategies, seed)
    label = system.name or "system"

    def sweep(words, name):
        with report.timed() as slot:
            slot["name"] = name
            bad = None
            errors = 0
            count = 0
            for w in words:
                count += 1
                p = NCPoly.from_word(w, system.alphabet)
                forms = []
                try:
                    for st in strats:
                        forms.append(system.normal_form(p, strategy=st))
                except FuelExhausted:
                    errors += 1
                    if bad is None:
                        bad = f"fuel exhausted on {system.alphabet.format_word(w)}"
                    continue
                if any(f != forms[0] for f in forms[1:]):
                    if bad is None:
                        diff = forms[0] - next(f for f in forms[1:] if f != forms[0])
                        bad = diff
                    errors += 1
            slot["ok"] = errors == 0
            slot["witness"] = bad
            slot["detail"] = f"{count} words, {len(strats)} strategies, {errors} disagreements"

    words = itertools.chain.from_iterable(all_words(system.alphabet, d) for d in range(2, max_degree + 1))
    sweep(words, f"{label}: exhaustive degree <= {max_degree}")
    if sample_degree:
        rng = random.Random(seed)
        n = len(system.alphabet)
        sample = [tuple(rng.randrange(n) for _ in range(sample_degree)) for _ in range(samples)]
        sweep(sample, f"{label}: {samples} random words of degree {sample_degree}")
    return report
