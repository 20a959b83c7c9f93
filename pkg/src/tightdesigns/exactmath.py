"""Exact rational scalars, dense matrices and linear solving.

Everything here works over :class:`fractions.Fraction`; no floating point
value is ever produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "ExactMatrix",
    "AffineSolutionSpace",
    "Inconsistent",
    "Singular",
    "IrrationalSpectrum",
    "as_fraction",
    "solve_affine",
    "invert",
    "characteristic_polynomial",
    "rational_eigenvalues",
]


class Inconsistent(ArithmeticError):
    """The linear system has no solution."""

    def __init__(self, row: int, message: str | None = None):
        self.row = row
        super().__init__(message or f"inconsistent system (witness row {row})")


class Singular(ArithmeticError):
    pass


class IrrationalSpectrum(ArithmeticError):
    """The characteristic polynomial does not split over the rationals."""

    def __init__(self, residual_degree: int, roots=()):
        self.residual_degree = residual_degree
        self.roots = tuple(roots)
        super().__init__(
            f"characteristic polynomial has an irreducible residual factor "
            f"of degree {residual_degree} over the rationals"
        )


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(x)


class ExactMatrix:
    """Immutable dense matrix of :class:`Fraction` entries."""

    __slots__ = ("_rows", "_shape")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        ncols = len(data[0]) if data else 0
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged rows")
        self._rows = data
        self._shape = (len(data), ncols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def diag(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    @property
    def nrows(self) -> int:
        return self._shape[0]

    @property
    def ncols(self) -> int:
        return self._shape[1]

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self._rows)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(zip(*self._rows)) if self._rows else ExactMatrix([])

    def is_square(self) -> bool:
        return self._shape[0] == self._shape[1]

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactMatrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._rows)
        return f"ExactMatrix([{body}])"

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)
        )

    def __mul__(self, scalar) -> "ExactMatrix":
        c = as_fraction(scalar)
        return ExactMatrix([c * x for x in row] for row in self._rows)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = other.T.rows
            return ExactMatrix(
                [sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols]
                for row in self._rows
            )
        vec = [as_fraction(x) for x in other]
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(sum((a * b for a, b in zip(row, vec) if a and b), Fraction(0)) for row in self._rows)

    def tolist(self) -> list[list[Fraction]]:
        return [list(row) for row in self._rows]


@dataclass(frozen=True)
class AffineSolutionSpace:
    """Solution set ``particular + span(basis)`` of a linear system.

    ``free_indices[i]`` is the unknown driven by ``basis[i]``; that basis
    vector carries a 1 there and a 0 at every other free index.
    """

    particular: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]
    free_indices: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def point(self, params: Sequence = ()) -> tuple[Fraction, ...]:
        if len(params) != len(self.basis):
            raise ValueError(f"expected {len(self.basis)} parameters")
        x = list(self.particular)
        for t, vec in zip(params, self.basis):
            t = as_fraction(t)
            if t:
                for idx, v in enumerate(vec):
                    if v:
                        x[idx] += t * v
        return tuple(x)

    def coordinates(self, x: Sequence) -> tuple[Fraction, ...] | None:
        """Parameters of ``x`` in this space, or ``None`` if ``x`` lies outside."""
        x = tuple(as_fraction(v) for v in x)
        params = tuple(x[f] - self.particular[f] for f in self.free_indices)
        return params if self.point(params) == x else None


def solve_affine(A: ExactMatrix, b: Sequence) -> AffineSolutionSpace:
    """Full solution set of ``A x = b`` by exact Gauss-Jordan elimination.

    Columns are scanned left to right and the pivot is the first remaining
    row (in input order) with a nonzero entry, so free unknowns are the
    trailing non-pivot columns and results are reproducible.
    """
    m, n = A.shape
    b = [as_fraction(x) for x in b]
    if len(b) != m:
        raise ValueError(f"A has {m} rows but b has {len(b)} entries")
    # sparse rows: dict col -> value, plus rhs and the originating row index
    rows = [({j: v for j, v in enumerate(A[i]) if v}, b[i], i) for i in range(m)]
    pivots: list[tuple[int, dict, Fraction]] = []
    remaining = rows
    for col in range(n):
        pick = next((r for r in remaining if col in r[0]), None)
        if pick is None:
            continue
        coeffs, rhs, _ = pick
        inv = 1 / coeffs[col]
        coeffs = {j: v * inv for j, v in coeffs.items()}
        rhs = rhs * inv
        new_remaining = []
        for r in remaining:
            if r is pick:
                continue
            rc, rr, ri = r
            f = rc.get(col)
            if f:
                rc = dict(rc)
                for j, v in coeffs.items():
                    nv = rc.get(j, 0) - f * v
                    if nv:
                        rc[j] = nv
                    else:
                        rc.pop(j, None)
                rr = rr - f * rhs
            new_remaining.append((rc, rr, ri))
        remaining = new_remaining
        # back-substitute into earlier pivot rows
        for idx, (pc, prow, prhs) in enumerate(pivots):
            f = prow.get(col)
            if f:
                prow = dict(prow)
                for j, v in coeffs.items():
                    nv = prow.get(j, 0) - f * v
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
                pivots[idx] = (pc, prow, prhs - f * rhs)
        pivots.append((col, coeffs, rhs))
    for rc, rr, ri in remaining:
        if not rc and rr != 0:
            raise Inconsistent(ri)
    pivot_cols = {c for c, _, _ in pivots}
    free = tuple(j for j in range(n) if j not in pivot_cols)
    particular = [Fraction(0)] * n
    for col, coeffs, rhs in pivots:
        particular[col] = rhs
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for col, coeffs, _ in pivots:
            v = coeffs.get(f)
            if v:
                vec[col] = -v
        basis.append(tuple(vec))
    return AffineSolutionSpace(tuple(particular), tuple(basis), free)


def invert(A: ExactMatrix) -> ExactMatrix:
    if not A.is_square():
        raise ValueError("matrix must be square")
    n = A.nrows
    aug = [list(A[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            f = aug[r][col]
            if r != col and f:
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return ExactMatrix(row[n:] for row in aug)


def characteristic_polynomial(A: ExactMatrix) -> tuple[Fraction, ...]:
    """Coefficients of ``det(xI - A)``, highest degree first (Faddeev-LeVerrier)."""
    if not A.is_square():
        raise ValueError("matrix must be square")
    n = A.nrows
    coeffs = [Fraction(1)]
    M = ExactMatrix.zeros(n, n)
    ident = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        M = A @ M + ident * coeffs[-1]
        AM = A @ M
        trace = sum((AM[i, i] for i in range(n)), Fraction(0))
        coeffs.append(-trace / k)
    return tuple(coeffs)


def _horner_divide(poly: list[int], root: int) -> tuple[list[int], int]:
    out = []
    acc = 0
    for c in poly:
        acc = acc * root + c
        out.append(acc)
    return out[:-1], out[-1]


def _divisors_up_to(m: int, bound: int) -> list[int]:
    m = abs(m)
    if bound * bound <= m or bound <= 10**6:
        return [d for d in range(1, min(bound, m) + 1) if m % d == 0]
    small = [d for d in range(1, math.isqrt(m) + 1) if m % d == 0]
    return sorted({d for s in small for d in (s, m // s) if d <= bound})


def rational_eigenvalues(A: ExactMatrix) -> list[tuple[Fraction, int]]:
    """All eigenvalues of ``A`` with algebraic multiplicities, descending.

    Raises :class:`IrrationalSpectrum` unless the characteristic polynomial
    splits into linear factors over the rationals.
    """
    if not A.is_square():
        raise ValueError("matrix must be square")
    n = A.nrows
    if n == 0:
        return []
    # scale to an integer matrix; its monic characteristic polynomial has
    # only integer rational roots
    scale = math.lcm(*(x.denominator for row in A.rows for x in row))
    B = A * scale
    poly = [int(c) for c in characteristic_polynomial(B)]
    bound = max(sum(abs(int(x)) for x in row) for row in B.rows)
    found: dict[int, int] = {}
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
        found[0] = found.get(0, 0) + 1
    if len(poly) > 1:
        for d in _divisors_up_to(poly[-1], bound):
            for root in (d, -d):
                while len(poly) > 1:
                    quotient, rem = _horner_divide(poly, root)
                    if rem:
                        break
                    poly = quotient
                    found[root] = found.get(root, 0) + 1
            if len(poly) == 1:
                break
    roots = sorted(((Fraction(r, scale), mult) for r, mult in found.items()), reverse=True)
    if len(poly) > 1:
        raise IrrationalSpectrum(len(poly) - 1, roots)
    return roots
