"""The 9x9 braiding matrix, its inverse, and the checks built on them.

Rows and columns are indexed by ordered pairs ``(k, l)`` in lex order
``11, 12, 13, 21, ..., 33``; ``C[(k,l)][(m,n)]`` is the coefficient in
``x^k xi^l = C^{kl}_{mn} xi^m x^n``.
"""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .report import VerificationReport
from .scalar import ONE, ZERO, Q, S, U, Scalar, format_scalar

PAIRS: Tuple[Tuple[int, int], ...] = tuple((i, j) for i in (1, 2, 3) for j in (1, 2, 3))
PAIR_INDEX: Dict[Tuple[int, int], int] = {p: n for n, p in enumerate(PAIRS)}


class SingularMatrixError(ArithmeticError):
    pass


class SMatrix:
    """Sparse square matrix over :class:`Scalar` (rows of ``{col: value}``)."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Mapping[int, Mapping[int, Scalar]] | None = None):
        self.n = n
        self.rows: Dict[int, Dict[int, Scalar]] = {}
        for i, row in (rows or {}).items():
            r = {j: Scalar.coerce(v) for j, v in row.items() if v}
            if r:
                self.rows[i] = r

    @classmethod
    def from_dense(cls, grid: Sequence[Sequence[object]]) -> "SMatrix":
        n = len(grid)
        return cls(n, {i: {j: v for j, v in enumerate(row)} for i, row in enumerate(grid)})

    @classmethod
    def identity(cls, n: int) -> "SMatrix":
        return cls(n, {i: {i: ONE} for i in range(n)})

    def __getitem__(self, ij: Tuple[int, int]) -> Scalar:
        i, j = ij
        return self.rows.get(i, {}).get(j, ZERO)

    def dense(self) -> List[List[Scalar]]:
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]

    def items(self) -> Iterable[Tuple[int, int, Scalar]]:
        for i, row in self.rows.items():
            for j, v in row.items():
                yield i, j, v

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other) -> bool:
        return isinstance(other, SMatrix) and self.n == other.n and self.rows == other.rows

    def __add__(self, other: "SMatrix") -> "SMatrix":
        out = {i: dict(r) for i, r in self.rows.items()}
        for i, j, v in other.items():
            row = out.setdefault(i, {})
            row[j] = row.get(j, ZERO) + v
        return SMatrix(self.n, out)

    def __neg__(self) -> "SMatrix":
        return SMatrix(self.n, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()})

    def __sub__(self, other: "SMatrix") -> "SMatrix":
        return self + (-other)

    def scale(self, c: Scalar) -> "SMatrix":
        return SMatrix(self.n, {i: {j: v * c for j, v in r.items()} for i, r in self.rows.items()})

    def __matmul__(self, other: "SMatrix") -> "SMatrix":
        out: Dict[int, Dict[int, Scalar]] = {}
        for i, row in self.rows.items():
            acc: Dict[int, Scalar] = {}
            for k, a in row.items():
                for j, b in other.rows.get(k, {}).items():
                    acc[j] = acc[j] + a * b if j in acc else a * b
            out[i] = acc
        return SMatrix(self.n, out)

    def transpose(self) -> "SMatrix":
        out: Dict[int, Dict[int, Scalar]] = {}
        for i, j, v in self.items():
            out.setdefault(j, {})[i] = v
        return SMatrix(self.n, out)

    def kron(self, other: "SMatrix") -> "SMatrix":
        m = other.n
        out: Dict[int, Dict[int, Scalar]] = {}
        for i, j, a in self.items():
            for k, l, b in other.items():
                out.setdefault(i * m + k, {})[j * m + l] = a * b
        return SMatrix(self.n * m, out)

    def substitute(self, bindings) -> "SMatrix":
        return SMatrix(self.n, {i: {j: v.substitute(bindings) for j, v in r.items()}
                                for i, r in self.rows.items()})

    def left_apply(self, f: Sequence[Scalar]) -> List[Scalar]:
        """Row vector times matrix."""
        out = [ZERO] * self.n
        for i, row in self.rows.items():
            fi = f[i]
            if not fi:
                continue
            for j, v in row.items():
                out[j] = out[j] + fi * v
        return out

    def inverse(self) -> "SMatrix":
        """Gauss-Jordan elimination with exact pivots."""
        n = self.n
        a = [dict(self.rows.get(i, {})) for i in range(n)]
        inv = [{i: ONE} for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r].get(col)), None)
            if piv is None:
                raise SingularMatrixError(f"no pivot in column {col}")
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            p = a[col][col].inverse()
            a[col] = {j: v * p for j, v in a[col].items()}
            inv[col] = {j: v * p for j, v in inv[col].items()}
            for r in range(n):
                if r == col:
                    continue
                f = a[r].get(col)
                if not f:
                    continue
                for src, dst in ((a[col], a[r]), (inv[col], inv[r])):
                    for j, v in src.items():
                        w = dst.get(j, ZERO) - f * v
                        if w:
                            dst[j] = w
                        else:
                            dst.pop(j, None)
        return SMatrix(n, {i: r for i, r in enumerate(inv)})

    def rank(self) -> int:
        rows = [dict(r) for r in self.rows.values()]
        rank = 0
        for col in range(self.n):
            piv = next((r for r in rows if r.get(col)), None)
            if piv is None:
                continue
            rows.remove(piv)
            p = piv[col].inverse()
            for r in rows:
                f = r.get(col)
                if not f:
                    continue
                fp = f * p
                for j, v in piv.items():
                    w = r.get(j, ZERO) - fp * v
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
            rank += 1
        return rank

    def nullspace_left(self) -> List[List[Scalar]]:
        """Basis of row vectors ``f`` with ``f @ self = 0``."""
        return _nullspace(self.transpose())

    def __repr__(self) -> str:
        return f"SMatrix({self.n}x{self.n}, {sum(len(r) for r in self.rows.values())} nonzero)"


def _nullspace(m: SMatrix) -> List[List[Scalar]]:
    n = m.n
    rows = [dict(m.rows.get(i, {})) for i in range(n)]
    pivots: Dict[int, Dict[int, Scalar]] = {}
    for r in rows:
        for col, prow in pivots.items():
            f = r.get(col)
            if f:
                for j, v in prow.items():
                    w = r.get(j, ZERO) - f * v
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
        if not r:
            continue
        col = min(r)
        p = r[col].inverse()
        r = {j: v * p for j, v in r.items()}
        for prow in pivots.values():
            f = prow.get(col)
            if f:
                for j, v in r.items():
                    w = prow.get(j, ZERO) - f * v
                    if w:
                        prow[j] = w
                    else:
                        prow.pop(j, None)
        pivots[col] = r
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for fcol in free:
        v = [ZERO] * n
        v[fcol] = ONE
        for col, prow in pivots.items():
            v[col] = -prow.get(fcol, ZERO)
        basis.append(v)
    return basis


class RMatrix(SMatrix):
    """9x9 matrix indexed by ordered pairs of {1, 2, 3}."""

    __slots__ = ()

    def __init__(self, rows=None):
        super().__init__(9, rows)

    @classmethod
    def of(cls, m: SMatrix) -> "RMatrix":
        r = cls()
        r.rows = m.rows
        return r

    def entry(self, kl: Tuple[int, int], mn: Tuple[int, int]) -> Scalar:
        return self[PAIR_INDEX[kl], PAIR_INDEX[mn]]

    def c(self, k: int, l: int, m: int, n: int) -> Scalar:
        """``C^{kl}_{mn}``."""
        return self.rows.get(PAIR_INDEX[(k, l)], {}).get(PAIR_INDEX[(m, n)], ZERO)

    def inverse(self) -> "RMatrix":
        return RMatrix.of(SMatrix.inverse(self))

    def transpose(self) -> "RMatrix":
        return RMatrix.of(SMatrix.transpose(self))

    def substitute(self, bindings) -> "RMatrix":
        return RMatrix.of(SMatrix.substitute(self, bindings))

    def __matmul__(self, other):
        res = SMatrix.__matmul__(self, other)
        return RMatrix.of(res) if other.n == 9 else res

    def to_json(self) -> str:
        return json.dumps({"rows": [[format_scalar(v) for v in row] for row in self.dense()]})

    @classmethod
    def from_json(cls, text: str) -> "RMatrix":
        from .parser import parse_scalar

        doc = json.loads(text)
        return cls.of(SMatrix.from_dense([[parse_scalar(v) for v in row] for row in doc["rows"]]))


# ---------------------------------------------------------------------------
# the two solutions
# ---------------------------------------------------------------------------


def build_omega() -> RMatrix:
    a = Q / U**2
    e = {
        ((1, 1), (1, 1)): a,
        ((1, 2), (2, 1)): Q**2 / U**2,
        ((1, 2), (3, 3)): Q * S / U**2,
        ((1, 3), (3, 1)): Q / U,
        ((2, 1), (1, 2)): 1 / Q,
        ((2, 1), (2, 1)): a - 1,
        ((2, 1), (3, 3)): -S / Q,
        ((2, 2), (2, 2)): a,
        ((2, 3), (2, 3)): a - 1,
        ((2, 3), (3, 2)): 1 / U,
        ((3, 1), (1, 3)): 1 / U,
        ((3, 1), (3, 1)): a - 1,
        ((3, 2), (2, 3)): Q / U,
        ((3, 3), (3, 3)): a,
    }
    rows: Dict[int, Dict[int, Scalar]] = {}
    for (kl, mn), v in e.items():
        rows.setdefault(PAIR_INDEX[kl], {})[PAIR_INDEX[mn]] = v
    return RMatrix(rows)


def build_omega_inverse() -> RMatrix:
    return build_omega().inverse()


def flip() -> RMatrix:
    """Permutation ``e_i (x) e_j -> e_j (x) e_i``."""
    return RMatrix({PAIR_INDEX[(i, j)]: {PAIR_INDEX[(j, i)]: ONE} for i, j in PAIRS})


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def yang_baxter_residual(c: SMatrix) -> SMatrix:
    """``(C x 1)(1 x C)(C x 1) - (1 x C)(C x 1)(1 x C)`` on the 27-dim cube."""
    i3 = SMatrix.identity(3)
    a = c.kron(i3)
    b = i3.kron(c)
    return (a @ b @ a) - (b @ a @ b)


def left_eigen_residual(f: Sequence[Scalar], c: SMatrix, lam) -> List[Scalar]:
    """``f C - lam f``."""
    lam = Scalar.coerce(lam)
    fc = c.left_apply(f)
    return [x - lam * y for x, y in zip(fc, f)]


def hecke_residual(c: SMatrix, lam) -> SMatrix:
    """``(C + 1)(C - lam)``; zero means C is diagonalisable with eigenvalues -1, lam."""
    i = SMatrix.identity(c.n)
    return (c + i) @ (c - i.scale(Scalar.coerce(lam)))


def eigenspace_dimension(c: SMatrix, lam) -> int:
    return c.n - (c - SMatrix.identity(c.n).scale(Scalar.coerce(lam))).rank()


def left_eigenspace(c: SMatrix, lam) -> List[List[Scalar]]:
    return (c - SMatrix.identity(c.n).scale(Scalar.coerce(lam))).nullspace_left()


def covector(coeffs: Mapping[Tuple[int, int], object]) -> List[Scalar]:
    """Covector on degree-2 words from ``{(k, l): coefficient}``."""
    f = [ZERO] * 9
    for kl, v in coeffs.items():
        f[PAIR_INDEX[kl]] = Scalar.coerce(v)
    return f


# name, residual (zero when the identity holds)
COEFFICIENT_IDENTITIES = [
    ("C12_12 = q C21_12 - 1", lambda C: C.c(1, 2, 1, 2) - (Q * C.c(2, 1, 1, 2) - 1)),
    ("C12_21 = q C21_21 + q", lambda C: C.c(1, 2, 2, 1) - (Q * C.c(2, 1, 2, 1) + Q)),
    ("C13_13 = u C31_13 - 1", lambda C: C.c(1, 3, 1, 3) - (U * C.c(3, 1, 1, 3) - 1)),
    ("C13_31 = u C31_31 + u", lambda C: C.c(1, 3, 3, 1) - (U * C.c(3, 1, 3, 1) + U)),
    ("C32_23 = u C23_23 + u", lambda C: C.c(3, 2, 2, 3) - (U * C.c(2, 3, 2, 3) + U)),
    ("C32_32 = u C23_32 - 1", lambda C: C.c(3, 2, 3, 2) - (U * C.c(2, 3, 3, 2) - 1)),
    ("C12_33 = q C21_33 + s C33_33 + s",
     lambda C: C.c(1, 2, 3, 3) - (Q * C.c(2, 1, 3, 3) + S * C.c(3, 3, 3, 3) + S)),
    ("C12_12 C21_21 = 0", lambda C: C.c(1, 2, 1, 2) * C.c(2, 1, 2, 1)),
    ("C13_13 C31_31 = 0", lambda C: C.c(1, 3, 1, 3) * C.c(3, 1, 3, 1)),
    ("C23_23 C32_32 = 0", lambda C: C.c(2, 3, 2, 3) * C.c(3, 2, 3, 2)),
]


def consistency_constraints_check(c: RMatrix, suite: str = "constraints", label: str = "") -> VerificationReport:
    """Evaluate the ten coefficient identities forced by d_i (R_xx) = 0."""
    report = VerificationReport(suite)
    prefix = f"{label}: " if label else ""
    for name, residual in COEFFICIENT_IDENTITIES:
        with report.timed() as slot:
            slot["name"] = prefix + name
            r = residual(c)
            slot["ok"] = r.is_zero()
            slot["witness"] = None if r.is_zero() else f"residual {format_scalar(r)}"
    return report
