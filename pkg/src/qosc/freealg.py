"""Words and noncommutative polynomials over a finite graded alphabet."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .scalar import ONE, ZERO, Scalar, format_scalar

Word = Tuple[int, ...]

EVEN, ODD = 0, 1


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    id: int
    display: str
    parity: int = EVEN
    precedence: int = 0


class Alphabet:
    """An ordered set of generators with a precedence (larger = bigger letter).

    Words compare by degree first, then lexicographically by precedence.
    """

    def __init__(self, generators: Sequence[Generator]):
        names = [g.display for g in generators]
        if len(set(names)) != len(names):
            raise AlphabetError(f"duplicate generator names in {names}")
        ids = [g.id for g in generators]
        if ids != list(range(len(generators))):
            raise AlphabetError("generator ids must be 0..n-1 in order")
        self.generators: Tuple[Generator, ...] = tuple(generators)
        self.index: Dict[str, int] = {g.display: g.id for g in generators}
        self.prec: Tuple[int, ...] = tuple(g.precedence for g in generators)
        self.parity: Tuple[int, ...] = tuple(g.parity for g in generators)
        self._key = (tuple(names), self.prec, self.parity)

    @classmethod
    def build(cls, names: Sequence[str], order: Sequence[str] | None = None,
              odd: Iterable[str] = ()) -> "Alphabet":
        """``order`` lists names from largest to smallest (default: ``names``)."""
        order = list(order) if order is not None else list(names)
        if sorted(order) != sorted(names):
            raise AlphabetError("precedence order must mention every generator once")
        odd = set(odd)
        rank = {n: len(order) - i for i, n in enumerate(order)}
        return cls([Generator(i, n, ODD if n in odd else EVEN, rank[n]) for i, n in enumerate(names)])

    def __len__(self) -> int:
        return len(self.generators)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Alphabet({', '.join(g.display for g in self.generators)})"

    @property
    def names(self) -> Tuple[str, ...]:
        return self._key[0]

    def letter(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise AlphabetError(f"unknown generator {name!r}") from None

    def word(self, *names: str) -> Word:
        return tuple(self.letter(n) for n in names)

    def word_key(self, w: Word) -> Tuple[int, Tuple[int, ...]]:
        prec = self.prec
        return (len(w), tuple(prec[a] for a in w))

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        g = self.generators
        return "*".join(g[a].display for a in w)

    def gen(self, name: str) -> "NCPoly":
        return NCPoly({(self.letter(name),): ONE}, self)

    def one(self) -> "NCPoly":
        return NCPoly({(): ONE}, self)

    def zero(self) -> "NCPoly":
        return NCPoly({}, self)


def word_parity(w: Word, alphabet: Alphabet) -> int:
    par = alphabet.parity
    return sum(par[a] for a in w) & 1


class NCPoly:
    """Finite sum of words with :class:`Scalar` coefficients."""

    __slots__ = ("terms", "alphabet")

    def __init__(self, terms: Mapping[Word, Scalar] | None, alphabet: Alphabet):
        self.alphabet = alphabet
        if terms is None:
            self.terms: Dict[Word, Scalar] = {}
        else:
            self.terms = {tuple(w): Scalar.coerce(c) for w, c in terms.items() if c}

    @classmethod
    def _raw(cls, terms: Dict[Word, Scalar], alphabet: Alphabet) -> "NCPoly":
        p = object.__new__(cls)
        p.terms = terms
        p.alphabet = alphabet
        return p

    @classmethod
    def from_word(cls, w: Word, alphabet: Alphabet, coeff: Scalar = ONE) -> "NCPoly":
        return cls._raw({tuple(w): coeff} if coeff else {}, alphabet)

    def _check(self, other: "NCPoly") -> None:
        if other.alphabet is not self.alphabet and other.alphabet != self.alphabet:
            raise AlphabetError(f"alphabet mismatch: {self.alphabet} vs {other.alphabet}")

    def _coerce(self, other) -> "NCPoly":
        if isinstance(other, NCPoly):
            self._check(other)
            return other
        c = Scalar.coerce(other)
        return NCPoly._raw({(): c} if c else {}, self.alphabet)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, NCPoly):
            return self.alphabet == other.alphabet and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw({w: -c for w, c in self.terms.items()}, self.alphabet)

    def __add__(self, other) -> "NCPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        add_into(out, other.terms)
        return NCPoly._raw(out, self.alphabet)

    __radd__ = __add__

    def __sub__(self, other) -> "NCPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "NCPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            c = Scalar.coerce(other)
            return self.scale(c)
        self._check(other)
        out: Dict[Word, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = out.get(w)
                out[w] = c1 * c2 if v is None else v + c1 * c2
        return NCPoly._raw({w: c for w, c in out.items() if c}, self.alphabet)

    def __rmul__(self, other) -> "NCPoly":
        return self.scale(Scalar.coerce(other))

    def __pow__(self, n: int) -> "NCPoly":
        result = self.alphabet.one()
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c: Scalar) -> "NCPoly":
        if not c:
            return NCPoly._raw({}, self.alphabet)
        if c.is_one():
            return self
        return NCPoly._raw({w: v * c for w, v in self.terms.items()}, self.alphabet)

    def coeff(self, w: Word) -> Scalar:
        return self.terms.get(tuple(w), ZERO)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def sorted_words(self, reverse: bool = True) -> List[Word]:
        return sorted(self.terms, key=self.alphabet.word_key, reverse=reverse)

    def leading_word(self) -> Word:
        return max(self.terms, key=self.alphabet.word_key)

    def substitute(self, bindings) -> "NCPoly":
        """Specialise the scalar parameters of every coefficient."""
        out = {}
        for w, c in self.terms.items():
            v = c.substitute(bindings)
            if v:
                out[w] = v
        return NCPoly._raw(out, self.alphabet)

    def embed(self, target: Alphabet) -> "NCPoly":
        """Re-express over another alphabet, matching the letters used by name."""
        src = self.alphabet.generators
        used = {a for w in self.terms for a in w}
        m = {a: target.letter(src[a].display) for a in used}
        return NCPoly._raw({tuple(m[a] for a in w): c for w, c in self.terms.items()}, target)

    def __repr__(self) -> str:
        return f"NCPoly({format_ncpoly(self)!r})"

    def __str__(self) -> str:
        return format_ncpoly(self)


def add_into(acc: Dict[Word, Scalar], terms: Mapping[Word, Scalar], factor: Scalar | None = None) -> None:
    """``acc += factor * terms`` in place, dropping cancelled words."""
    for w, c in terms.items():
        if factor is not None:
            c = c * factor
        v = acc.get(w)
        if v is None:
            acc[w] = c
        else:
            v = v + c
            if v:
                acc[w] = v
            else:
                del acc[w]


def apply_morphism(p: NCPoly, images: Mapping[int, NCPoly], target: Alphabet,
                   anti: bool = False) -> NCPoly:
    """Extend a letter map to words, multiplicatively (or anti-multiplicatively).

    Letters missing from ``images`` are mapped to themselves by name.
    """
    cache: Dict[int, NCPoly] = {}

    def img(a: int) -> NCPoly:
        if a not in cache:
            if a in images:
                cache[a] = images[a]
            else:
                cache[a] = target.gen(p.alphabet.generators[a].display)
        return cache[a]

    total: Dict[Word, Scalar] = {}
    for w, c in p.terms.items():
        letters = reversed(w) if anti else w
        acc = NCPoly._raw({(): c}, target)
        for a in letters:
            acc = acc * img(a)
            if not acc.terms:
                break
        add_into(total, acc.terms)
    return NCPoly._raw(total, target)


def alphabet_union(a: Alphabet, b: Alphabet) -> Tuple[Alphabet, List[NCPoly]]:
    """Disjoint union whose letters from ``b`` rank above those of ``a``.

    Also returns the cross relations ``g_b*g_a - g_a*g_b`` making the two
    factors commute (tensor product of algebras).
    """
    clash = set(a.names) & set(b.names)
    if clash:
        raise AlphabetError(f"generator name collision: {sorted(clash)}")
    top = max(a.prec, default=0)
    gens = [Generator(g.id, g.display, g.parity, g.precedence) for g in a.generators]
    n = len(gens)
    gens += [Generator(n + g.id, g.display, g.parity, g.precedence + top) for g in b.generators]
    ab = Alphabet(gens)
    cross = []
    for ga in a.generators:
        for gb in b.generators:
            ia, ib = ga.id, n + gb.id
            cross.append(NCPoly._raw({(ib, ia): ONE, (ia, ib): -ONE}, ab))
    return ab, cross


def format_ncpoly(p: NCPoly) -> str:
    """Render in the CLI grammar, e.g. ``x1*x2 - q*x2*x1 - s*x3*x3``."""
    if not p.terms:
        return "0"
    out = []
    for i, w in enumerate(p.sorted_words()):
        c = p.terms[w]
        neg = c.sign() < 0
        a = -c if neg else c
        word = p.alphabet.format_word(w) if w else ""
        if a.is_one():
            body = word or "1"
        else:
            cs = format_scalar(a)
            if a.den.is_one() and len(a.num.terms) > 1:
                cs = f"({cs})"
            body = f"{cs}*{word}" if word else cs
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
