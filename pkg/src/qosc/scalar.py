"""Exact arithmetic in the rational function field Q(q, u, s).

Every coefficient in the oscillator, calculus and quantum-group algebras is a
:class:`Scalar`: a reduced fraction of two :class:`MultiPoly` objects whose
coefficients are arbitrary-precision rationals (``gmpy2.mpq``).

Most coefficients that show up in practice are Laurent monomials or Laurent
polynomials, i.e. their denominator is a single monomial.  That case is
handled without any polynomial gcd; only genuinely non-monomial denominators
go through :func:`poly_gcd`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple, Union

from gmpy2 import mpq

__all__ = [
    "VARS",
    "MultiPoly",
    "Scalar",
    "ScalarDivisionError",
    "SubstitutionError",
    "poly_gcd",
    "ZERO",
    "ONE",
    "Q",
    "U",
    "S",
]

VARS = ("q", "u", "s")

Exp = Tuple[int, int, int]
_E0: Exp = (0, 0, 0)

Number = Union[int, Fraction, "mpq"]


class ScalarDivisionError(ZeroDivisionError):
    """Division by the zero rational function."""


class SubstitutionError(ZeroDivisionError):
    """A substitution made a denominator vanish identically."""

    def __init__(self, message: str, bindings: Mapping[str, "Scalar"]):
        super().__init__(message)
        self.bindings = dict(bindings)


class MultiPoly:
    """Sparse polynomial in q, u, s with rational coefficients.

    ``terms`` maps exponent triples ``(e_q, e_u, e_s)`` to nonzero ``mpq``
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Exp, Number] | None = None):
        if terms is None:
            self.terms: Dict[Exp, mpq] = {}
        else:
            self.terms = {e: mpq(c) for e, c in terms.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exp, mpq]) -> "MultiPoly":
        # caller guarantees no zero coefficients
        p = object.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Number) -> "MultiPoly":
        c = mpq(c)
        return cls._raw({_E0: c} if c else {})

    @classmethod
    def monomial(cls, exp: Exp, c: Number = 1) -> "MultiPoly":
        c = mpq(c)
        return cls._raw({tuple(exp): c} if c else {})

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(_E0) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _E0 in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- ordering helpers -----------------------------------------------
    def leading(self) -> Tuple[Exp, mpq]:
        """Leading term under lex order on (e_q, e_u, e_s)."""
        e = max(self.terms)
        return e, self.terms[e]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> Iterator[Tuple[Exp, mpq]]:
        for e in sorted(self.terms, reverse=True):
            yield e, self.terms[e]

    # -- arithmetic -----------------------------------------------------
    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({e: -c for e, c in self.terms.items()})

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly._raw(out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly._raw({})
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            (ea, ca), = a.items()
            if ea == _E0:
                if ca == 1:
                    return other if b is other.terms else self
                return MultiPoly._raw({e: c * ca for e, c in b.items()})
            return MultiPoly._raw(
                {(e[0] + ea[0], e[1] + ea[1], e[2] + ea[2]): c * ca for e, c in b.items()}
            )
        out: Dict[Exp, mpq] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return MultiPoly._raw({e: c for e, c in out.items() if c})

    def scale(self, c: Number) -> "MultiPoly":
        c = mpq(c)
        if not c:
            return MultiPoly._raw({})
        if c == 1:
            return self
        return MultiPoly._raw({e: v * c for e, v in self.terms.items()})

    def shift(self, exp: Exp, negative: bool = False) -> "MultiPoly":
        """Multiply (or, with ``negative``, exactly divide) by a monomial."""
        if negative:
            return MultiPoly._raw(
                {(e[0] - exp[0], e[1] - exp[1], e[2] - exp[2]): c for e, c in self.terms.items()}
            )
        return MultiPoly._raw(
            {(e[0] + exp[0], e[1] + exp[1], e[2] + exp[2]): c for e, c in self.terms.items()}
        )

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def min_exponents(self) -> Exp:
        it = iter(self.terms)
        m = list(next(it))
        for e in it:
            if e[0] < m[0]:
                m[0] = e[0]
            if e[1] < m[1]:
                m[1] = e[1]
            if e[2] < m[2]:
                m[2] = e[2]
        return (m[0], m[1], m[2])

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)})"

    def __str__(self) -> str:
        return format_poly(self)


# ---------------------------------------------------------------------------
# gcd
# ---------------------------------------------------------------------------

_SYMPY_RING = None


def _sympy_ring():
    global _SYMPY_RING
    if _SYMPY_RING is None:
        from sympy.polys.domains import QQ
        from sympy.polys.rings import ring

        _SYMPY_RING = ring(",".join(VARS), QQ)[0]
    return _SYMPY_RING


def _to_sympy(p: MultiPoly):
    R = _sympy_ring()
    dom = R.domain
    return R.from_dict({e: dom(int(c.numerator), int(c.denominator)) for e, c in p.terms.items()})


def _from_sympy(p) -> MultiPoly:
    return MultiPoly._raw(
        {tuple(e): mpq(int(c.numerator), int(c.denominator)) for e, c in p.terms() if c}
    )


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic (lex-leading coefficient 1) gcd of two polynomials."""
    if a.is_zero():
        g = b
    elif b.is_zero():
        g = a
    elif a.is_monomial() or b.is_monomial():
        ea = a.min_exponents()
        eb = b.min_exponents()
        g = MultiPoly.monomial(tuple(min(x, y) for x, y in zip(ea, eb)))
    else:
        g = _from_sympy(_to_sympy(a).gcd(_to_sympy(b)))
    if g.is_zero():
        return g
    return g.scale(1 / g.leading()[1])


def poly_div_exact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if b.is_monomial():
        (e, c), = b.terms.items()
        return a.shift(e, negative=True).scale(1 / c)
    qt, r = divmod(_to_sympy(a), _to_sympy(b))
    if r:
        raise ArithmeticError("inexact polynomial division")
    return _from_sympy(qt)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


def _canonical(num: MultiPoly, den: MultiPoly) -> Tuple[MultiPoly, MultiPoly]:
    if den.is_zero():
        raise ScalarDivisionError("zero denominator")
    if num.is_zero():
        return num, _ONE_POLY
    if len(den.terms) == 1:
        (ed, cd), = den.terms.items()
        if ed == _E0:
            if cd == 1:
                return num, _ONE_POLY
            return num.scale(1 / cd), _ONE_POLY
        en = num.min_exponents()
        g = (min(en[0], ed[0]), min(en[1], ed[1]), min(en[2], ed[2]))
        if g != _E0:
            num = num.shift(g, negative=True)
            ed = (ed[0] - g[0], ed[1] - g[1], ed[2] - g[2])
        if cd != 1:
            num = num.scale(1 / cd)
        if ed == _E0:
            return num, _ONE_POLY
        return num, MultiPoly._raw({ed: mpq(1)})
    # strip common monomial content first, then a full gcd
    en = num.min_exponents()
    ed = den.min_exponents()
    g = (min(en[0], ed[0]), min(en[1], ed[1]), min(en[2], ed[2]))
    if g != _E0:
        num = num.shift(g, negative=True)
        den = den.shift(g, negative=True)
    if not num.is_monomial():
        gg = poly_gcd(num, den)
        if not gg.is_constant():
            num = poly_div_exact(num, gg)
            den = poly_div_exact(den, gg)
    lc = den.leading()[1]
    if lc != 1:
        inv = 1 / lc
        num = num.scale(inv)
        den = den.scale(inv)
    if den.is_one():
        return num, _ONE_POLY
    return num, den


_ONE_POLY = MultiPoly._raw({_E0: mpq(1)})


class Scalar:
    """Element of Q(q, u, s) held as a canonical fraction ``num/den``.

    Canonical means ``gcd(num, den) = 1`` and the lex-leading coefficient of
    ``den`` is 1, so equality is equality of the two term maps.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Union[MultiPoly, Number] = 0, den: Union[MultiPoly, Number] = 1):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.constant(num)
        if not isinstance(den, MultiPoly):
            den = MultiPoly.constant(den)
        self.num, self.den = _canonical(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: MultiPoly, den: MultiPoly) -> "Scalar":
        x = object.__new__(cls)
        x.num = num
        x.den = den
        x._hash = None
        return x

    @classmethod
    def var(cls, name: str) -> "Scalar":
        i = VARS.index(name)
        e = [0, 0, 0]
        e[i] = 1
        return cls._raw(MultiPoly.monomial(tuple(e)), _ONE_POLY)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)) or type(x) is type(mpq(0)):
            c = mpq(x)
            return cls._raw(MultiPoly._raw({_E0: c} if c else {}), _ONE_POLY)
        if isinstance(x, str):
            from .parser import parse_scalar

            return parse_scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.terms

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_one()

    def is_laurent_monomial(self) -> bool:
        """True for ``c * q^a u^b s^c`` with a, b, c possibly negative."""
        return self.num.is_monomial() and self.den.is_monomial()

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num.terms == other.num.terms and self.den.terms == other.den.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic -----------------------------------------------------
    def __neg__(self) -> "Scalar":
        return Scalar._raw(-self.num, self.den)

    def __add__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = _maybe(other)
            if other is None:
                return NotImplemented
        if not self.num.terms:
            return other
        if not other.num.terms:
            return self
        if self.den.terms == other.den.terms:
            if self.den.is_one():
                s = self.num + other.num
                return Scalar._raw(s, _ONE_POLY)
            return Scalar._from(self.num + other.num, self.den)
        return Scalar._from(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = _maybe(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        other = _maybe(other)
        return NotImplemented if other is None else other - self

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = _maybe(other)
            if other is None:
                return NotImplemented
        if not self.num.terms or not other.num.terms:
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num * other.num, _ONE_POLY)
        if self.num.is_monomial() and other.num.is_monomial() and self.den.is_monomial() and other.den.is_monomial():
            return Scalar._from(self.num * other.num, self.den * other.den)
        # cross-cancel before multiplying keeps sizes down
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = (self.num, other.den) if g1.is_constant() else (poly_div_exact(self.num, g1), poly_div_exact(other.den, g1))
        n2, d1 = (other.num, self.den) if g2.is_constant() else (poly_div_exact(other.num, g2), poly_div_exact(self.den, g2))
        return Scalar._from(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num.terms:
            raise ScalarDivisionError("division by zero scalar")
        return Scalar._from(self.den, self.num)

    def __truediv__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = _maybe(other)
            if other is None:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        other = _maybe(other)
        return NotImplemented if other is None else other * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        return Scalar._raw(self.num ** n, self.den ** n) if n else ONE

    @staticmethod
    def _from(num: MultiPoly, den: MultiPoly) -> "Scalar":
        n, d = _canonical(num, den)
        return Scalar._raw(n, d)

    def canonicalize(self) -> "Scalar":
        return Scalar._from(self.num, self.den)

    # -- substitution ---------------------------------------------------
    def substitute(self, bindings: Mapping[str, "Scalar | Number | str"]) -> "Scalar":
        """Simultaneously replace parameters by scalars.

        Raises :class:`SubstitutionError` when the denominator vanishes.
        """
        b = {k: Scalar.coerce(v) for k, v in bindings.items()}
        for k in b:
            if k not in VARS:
                raise KeyError(f"unknown parameter {k!r}")
        if not b:
            return self
        num = _eval_poly(self.num, b)
        den = _eval_poly(self.den, b)
        if den.is_zero():
            names = ", ".join(f"{k}={v}" for k, v in b.items())
            raise SubstitutionError(f"denominator {self.den} vanishes under {names}", b)
        return num / den

    def evaluate(self, **values) -> "Scalar":
        return self.substitute(values)

    def sign(self) -> int:
        """Sign of the leading numerator coefficient (used for printing)."""
        if not self.num.terms:
            return 0
        return 1 if self.num.leading()[1] > 0 else -1

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


def _maybe(x) -> "Scalar | None":
    if isinstance(x, (int, Fraction)) or type(x) is _MPQ:
        return Scalar.coerce(x)
    return None


_MPQ = type(mpq(0))


def _eval_poly(p: MultiPoly, b: Mapping[str, Scalar]) -> Scalar:
    gens = [b.get(v) for v in VARS]
    powers = [{} for _ in VARS]

    def pw(i: int, k: int) -> Scalar:
        cache = powers[i]
        if k not in cache:
            cache[k] = gens[i] ** k
        return cache[k]

    total = ZERO
    for e, c in p.terms.items():
        keep = [0, 0, 0]
        term = Scalar.coerce(c)
        for i, k in enumerate(e):
            if not k:
                continue
            if gens[i] is None:
                keep[i] = k
            else:
                term = term * pw(i, k)
        if keep != [0, 0, 0]:
            term = term * Scalar._raw(MultiPoly.monomial(tuple(keep)), _ONE_POLY)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# printing (CLI grammar)
# ---------------------------------------------------------------------------


def _format_rational(c) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_monomial(e: Exp) -> str:
    parts = []
    for name, k in zip(VARS, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        mono = _format_monomial(e)
        if not mono:
            body = _format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_rational(a)}*{mono}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def _wrap(text: str, p: MultiPoly, denominator: bool = False) -> str:
    if len(p.terms) > 1 or (denominator and ("*" in text or "/" in text)):
        return f"({text})"
    return text


def format_scalar(x: Scalar) -> str:
    """Render in the CLI scalar grammar, e.g. ``(q - u^2)/u^2``."""
    if x.den.is_one():
        return format_poly(x.num)
    n = format_poly(x.num)
    d = format_poly(x.den)
    return f"{_wrap(n, x.num)}/{_wrap(d, x.den, denominator=True)}"


ZERO = Scalar._raw(MultiPoly._raw({}), _ONE_POLY)
ONE = Scalar._raw(_ONE_POLY, _ONE_POLY)
Q = Scalar.var("q")
U = Scalar.var("u")
S = Scalar.var("s")
