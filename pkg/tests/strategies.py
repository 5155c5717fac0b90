"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from qosc.scalar import Scalar

q, u, s = (Scalar.var(n) for n in "qus")

small = st.integers(-3, 3)


@st.composite
def laurent_poly(draw, terms=3):
    out = Scalar.coerce(0)
    for _ in range(draw(st.integers(0, terms))):
        c = draw(st.integers(-4, 4))
        out = out + c * q ** draw(small) * u ** draw(small) * s ** draw(st.integers(0, 2))
    return out


@st.composite
def scalars(draw):
    """Ratios of small Laurent polynomials, the shape of the coefficients we meet."""
    num = draw(laurent_poly())
    den = draw(laurent_poly())
    if den.is_zero():
        den = Scalar.coerce(1)
    return num / den


nonzero_rationals = st.builds(Fraction, st.integers(-9, 9).filter(bool), st.integers(1, 9))


def ncpolys(alphabet, max_terms=3, max_len=3):
    """Random polynomials with small integer and parameter coefficients."""
    from qosc.freealg import NCPoly

    letters = st.integers(0, len(alphabet) - 1)
    word = st.lists(letters, max_size=max_len).map(tuple)
    coeff = st.sampled_from([1, -1, 2, q, u, s, q / u**2, s - 1]).map(Scalar.coerce)

    def build(pairs):
        p = alphabet.zero()
        for w, c in pairs:
            p = p + NCPoly.from_word(w, alphabet, c)
        return p

    return st.lists(st.tuples(word, coeff), max_size=max_terms).map(build)
