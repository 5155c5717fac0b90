"""Inspect the t' commutativity claim in the q = u^2, t31 = t32 = 0 subgroup.

Prints every pair's residual with and without t33^2 = t11 t22 - u^-2 t12 t21.
"""

import itertools

from qosc import quantumgroup as qg
from qosc.scalar import Scalar

u = Scalar.var("u")


def residuals(constrained):
    loc = qg.subgroup_localization(constrained=constrained)
    a = loc.alphabet
    inv = a.gen(qg.T33INV)
    names = [n for n in qg.T_NAMES if n not in qg.SUBGROUP_ZERO]
    for x, y in itertools.combinations(names, 2):
        px, py = a.gen(x) * inv, a.gen(y) * inv
        yield x, y, loc.normal_form(px * py - py * px)


def main():
    for constrained in (False, True):
        print("with t33^2 = t11 t22 - u^-2 t12 t21" if constrained else "quotient by t31 = t32 = 0 only")
        for x, y, res in residuals(constrained):
            print(f"  [{x}', {y}'] = {res or 0}")
    quotient = qg._quotient_subgroup({"q": u**2})
    print("t*t33 = c*t33*t in the quotient:")
    for n, c in qg.t33_factors(quotient).items():
        print(f"  {n}: {c}")


if __name__ == "__main__":
    main()
