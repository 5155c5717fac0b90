import pytest
from hypothesis import given, strategies as st

from qosc.calculus import FORMS, X_ALPHABET, XI_ALPHABET
from qosc.freealg import AlphabetError, NCPoly, alphabet_union, format_ncpoly, word_parity
from qosc.quantumgroup import BAR, T_ALPHABET

from strategies import ncpolys, q, s

X = X_ALPHABET
x1, x2, x3 = (X.gen(n) for n in ("x1", "x2", "x3"))


def test_concatenation():
    assert x1 * (x2 * x3) == NCPoly.from_word(X.word("x1", "x2", "x3"), X)


def test_distributivity():
    assert (x1 + x2) * x3 == x1 * x3 + x2 * x3


def test_scalar_bilinearity():
    assert (x1.scale(q)) * (x3.scale(s)) == NCPoly.from_word(X.word("x1", "x3"), X, q * s)


def test_alphabet_mismatch():
    with pytest.raises(AlphabetError):
        x1 * XI_ALPHABET.gen("xi1")


def test_union_t_x():
    ab, cross = alphabet_union(T_ALPHABET, X)
    assert len(ab) == 12 and len(cross) == 27


def test_union_t_bar():
    ab, cross = alphabet_union(T_ALPHABET, BAR)
    assert len(ab) == 18 and len(cross) == 81


def test_union_collision():
    with pytest.raises(AlphabetError, match="x1"):
        alphabet_union(X, X)


def test_cross_rules_put_second_factor_first():
    ab, cross = alphabet_union(T_ALPHABET, X)
    assert all(ab.generators[p.leading_word()[0]].display.startswith("x") for p in cross)


def test_parity_examples():
    assert word_parity(FORMS.word("xi1", "x2"), FORMS) == 1
    assert word_parity(FORMS.word("xi1", "xi2"), FORMS) == 0
    assert word_parity((), FORMS) == 0


def test_format():
    assert format_ncpoly(x1 * x2 - (x2 * x1).scale(q)) in ("x1*x2 - q*x2*x1", "-q*x2*x1 + x1*x2")


@given(ncpolys(X), ncpolys(X), ncpolys(X))
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(ncpolys(X))
def test_unit_is_neutral(p):
    one = X.one()
    assert one * p == p and p * one == p


words = st.lists(st.integers(0, len(FORMS) - 1), max_size=5).map(tuple)


@given(words, words)
def test_parity_is_monoid_morphism(v, w):
    assert word_parity(v + w, FORMS) == (word_parity(v, FORMS) + word_parity(w, FORMS)) % 2
