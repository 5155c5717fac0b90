"""Cached systems shared by several test modules."""

from functools import lru_cache

from qosc.calculus import D_ALPHABET, X_ALPHABET, XI_ALPHABET, generate_calculus
from qosc.rmatrix import build_omega, build_omega_inverse


@lru_cache(maxsize=None)
def calculus(key="omega"):
    c = build_omega() if key == "omega" else build_omega_inverse()
    return generate_calculus(c, key)


def xx():
    return calculus().subsystem(("xx",), X_ALPHABET)


def xixi():
    return calculus().subsystem(("xixi",), XI_ALPHABET)


def dd():
    return calculus().subsystem(("dd",), D_ALPHABET)
