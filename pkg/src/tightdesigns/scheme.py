"""Association-scheme parameter sets derived from Krein arrays.

A parameter set is held in :class:`SchemeParameters`.  Two entry points
build one: :func:`from_krein_array` for a Q-polynomial scheme described by
its Krein array, and :func:`from_intersection_numbers` for a scheme whose
intersection numbers were counted on an explicit vertex set.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Sequence

from .exactmath import (
    ExactMatrix,
    as_fraction,
    invert,
    rational_eigenvalues,
    solve_affine,
)

__all__ = [
    "KreinArray",
    "SchemeParameters",
    "FeasibilityReport",
    "KreinZeroSet",
    "DegenerateArray",
    "from_krein_array",
    "from_eigenmatrix",
    "from_intersection_numbers",
    "feasibility_report",
    "krein_zero_set",
    "qant4_krein_array",
    "noda_krein_array",
    "triangle_ok",
]

Cube = tuple[tuple[tuple[Fraction, ...], ...], ...]


class DegenerateArray(ValueError):
    pass


def _fmt(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class KreinArray:
    """``{b0*, ..., b_{D-1}*; c1*, ..., c_D*}`` of a Q-polynomial scheme."""

    b_star: tuple[Fraction, ...]
    c_star: tuple[Fraction, ...]

    def __post_init__(self):
        b = tuple(as_fraction(x) for x in self.b_star)
        c = tuple(as_fraction(x) for x in self.c_star)
        if not b or len(b) != len(c):
            raise ValueError("b* and c* must be non-empty and of equal length")
        if any(x <= 0 for x in b + c):
            raise ValueError("Krein array entries must be positive")
        object.__setattr__(self, "b_star", b)
        object.__setattr__(self, "c_star", c)
        if c[0] != 1:
            warnings.warn(f"c1* = {c[0]} differs from the conventional value 1")

    @classmethod
    def parse(cls, text: str) -> "KreinArray":
        """Parse ``"b0,b1,...;c1,c2,..."`` (braces and spaces are ignored)."""
        body = text.strip().strip("{}").replace(" ", "")
        try:
            left, right = body.split(";")
            b = [Fraction(x) for x in left.split(",") if x]
            c = [Fraction(x) for x in right.split(",") if x]
        except ValueError as exc:
            raise ValueError(f"malformed Krein array {text!r}") from exc
        return cls(tuple(b), tuple(c))

    @property
    def D(self) -> int:
        return len(self.b_star)

    def b(self, i: int) -> Fraction:
        return self.b_star[i] if 0 <= i < self.D else Fraction(0)

    def c(self, i: int) -> Fraction:
        return self.c_star[i - 1] if 1 <= i <= self.D else Fraction(0)

    def a(self, i: int) -> Fraction:
        return self.b_star[0] - self.b(i) - self.c(i)

    def is_q_antipodal(self) -> bool:
        D = self.D
        return all(self.b(i) == self.c(D - i) for i in range(D) if i != D // 2)

    def L1(self) -> ExactMatrix:
        """Tridiagonal matrix with entry ``(k, j) = q_{1j}^k``."""
        D = self.D
        rows = []
        for k in range(D + 1):
            row = [Fraction(0)] * (D + 1)
            if k > 0:
                row[k - 1] = self.c(k)
            row[k] = self.a(k)
            if k < D:
                row[k + 1] = self.b(k)
            rows.append(row)
        return ExactMatrix(rows)

    def __str__(self) -> str:
        return "{%s; %s}" % (
            ", ".join(map(_fmt, self.b_star)),
            ", ".join(map(_fmt, self.c_star)),
        )

    def compact(self) -> str:
        return ",".join(map(_fmt, self.b_star)) + ";" + ",".join(map(_fmt, self.c_star))


@dataclass(frozen=True)
class SchemeParameters:
    D: int
    vertex_count: Fraction
    Q: ExactMatrix
    P: ExactMatrix
    valencies: tuple[Fraction, ...]
    multiplicities: tuple[Fraction, ...]
    intersection_numbers: Cube
    krein_parameters: Cube
    krein_array: KreinArray | None = None

    def p(self, i: int, j: int, k: int) -> Fraction:
        return self.intersection_numbers[i][j][k]

    def q(self, i: int, j: int, k: int) -> Fraction:
        return self.krein_parameters[i][j][k]

    def dual_eigenvalues(self) -> tuple[Fraction, ...]:
        return self.Q.column(1)

    def read_krein_array(self) -> KreinArray | None:
        """Krein array read back from ``q_{1j}^k``, if ``L1*`` is tridiagonal."""
        D = self.D
        if D < 1:
            return None
        for k in range(D + 1):
            for j in range(D + 1):
                if abs(j - k) > 1 and self.q(1, j, k) != 0:
                    return None
        b = tuple(self.q(1, i + 1, i) for i in range(D))
        c = tuple(self.q(1, i - 1, i) for i in range(1, D + 1))
        if any(x == 0 for x in b + c):
            return None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return KreinArray(b, c)

    def same_parameters(self, other: "SchemeParameters") -> bool:
        return (
            self.D == other.D
            and self.vertex_count == other.vertex_count
            and self.Q == other.Q
            and self.P == other.P
            and self.valencies == other.valencies
            and self.multiplicities == other.multiplicities
            and self.intersection_numbers == other.intersection_numbers
            and self.krein_parameters == other.krein_parameters
        )

    def to_dict(self) -> dict:
        def cube(c):
            return [[[str(x) for x in row] for row in plane] for plane in c]

        return {
            "D": self.D,
            "vertex_count": str(self.vertex_count),
            "krein_array": self.krein_array.compact() if self.krein_array else None,
            "valencies": [str(x) for x in self.valencies],
            "multiplicities": [str(x) for x in self.multiplicities],
            "Q": [[str(x) for x in row] for row in self.Q.rows],
            "P": [[str(x) for x in row] for row in self.P.rows],
            "intersection_numbers": cube(self.intersection_numbers),
            "krein_parameters": cube(self.krein_parameters),
        }


def _triple_sum_cube(M: ExactMatrix, weights: Sequence[Fraction], n: Fraction, norm) -> Cube:
    D = M.nrows - 1
    out = []
    for i in range(D + 1):
        plane = []
        for j in range(D + 1):
            row = []
            for k in range(D + 1):
                s = sum(
                    (weights[l] * M[l, i] * M[l, j] * M[l, k] for l in range(D + 1)),
                    Fraction(0),
                )
                row.append(s / (n * norm[k]))
            plane.append(tuple(row))
        out.append(tuple(plane))
    return tuple(out)


def from_eigenmatrix(Q: ExactMatrix, krein_array: KreinArray | None = None) -> SchemeParameters:
    """Complete parameter set from the second eigenmatrix ``Q``.

    Rows of ``Q`` are indexed by relations, columns by idempotents.
    """
    D = Q.nrows - 1
    n = sum(Q[0], Fraction(0))
    P = invert(Q) * n
    k = tuple(P[0])
    m = tuple(Q[0])
    p = _triple_sum_cube(P, m, n, k)
    q = _triple_sum_cube(Q, k, n, m)
    return SchemeParameters(D, n, Q, P, k, m, p, q, krein_array)


def from_krein_array(ka: KreinArray) -> SchemeParameters:
    L1 = ka.L1()
    spectrum = rational_eigenvalues(L1)
    if any(mult > 1 for _, mult in spectrum):
        repeated = [str(t) for t, mult in spectrum if mult > 1]
        raise DegenerateArray(f"repeated dual eigenvalue(s) {', '.join(repeated)}")
    theta0 = ka.b_star[0]
    rest = sorted((t for t, _ in spectrum if t != theta0), reverse=True)
    if len(rest) != ka.D:
        raise DegenerateArray(f"b0* = {theta0} is not a dual eigenvalue")
    thetas = [theta0] + rest
    rows = []
    for th in thetas:
        v = [Fraction(1), th]
        for i in range(1, ka.D):
            v.append(((th - ka.a(i)) * v[i] - ka.b(i - 1) * v[i - 1]) / ka.c(i + 1))
        rows.append(v[: ka.D + 1])
    return from_eigenmatrix(ExactMatrix(rows), ka)


def _character_table(p: Cube) -> list[tuple[Fraction, ...]]:
    """Rows of ``P`` (unordered) from intersection numbers.

    Row ``l`` of ``P`` is a common eigenvector of the transposed
    intersection matrices, normalised to a leading 1.
    """
    D = len(p) - 1
    B = [ExactMatrix([[p[i][j][k] for k in range(D + 1)] for j in range(D + 1)]) for i in range(D + 1)]
    # B[i] is the transpose of the intersection matrix L_i: (B_i)_{jk} = p_ij^k
    for weights in itertools.chain(
        [tuple(range(D + 1))],
        (tuple((s**e) for e in range(D + 1)) for s in range(2, 2 + 4 * (D + 1))),
    ):
        M = ExactMatrix.zeros(D + 1, D + 1)
        for w, Bi in zip(weights, B):
            if w:
                M = M + Bi * w
        spectrum = rational_eigenvalues(M)
        if len(spectrum) == D + 1:
            break
    else:
        raise DegenerateArray("could not separate the eigenspaces of the Bose-Mesner algebra")
    rows = []
    for lam, _ in spectrum:
        shifted = M - ExactMatrix.identity(D + 1) * lam
        space = solve_affine(shifted, [0] * (D + 1))
        (vec,) = space.basis
        rows.append(tuple(x / vec[0] for x in vec))
    return rows


def triangle_ok(i: int, j: int, k: int) -> bool:
    return abs(i - j) <= k <= i + j


def _q_polynomial_orderings(q: Cube) -> list[list[int]]:
    D = len(q) - 1
    found = []
    for first in range(1, D + 1):
        seq = [0, first]
        while len(seq) < D + 1:
            last = seq[-1]
            nxt = [k for k in range(D + 1) if k not in seq and q[first][last][k] != 0]
            if len(nxt) != 1:
                break
            seq.append(nxt[0])
        if len(seq) != D + 1:
            continue
        pos = {e: i for i, e in enumerate(seq)}
        ok = all(
            (q[first][j][k] != 0) == (abs(pos[j] - pos[k]) == 1)
            for j in range(D + 1)
            for k in range(D + 1)
            if j != k
        )
        if ok:
            found.append(seq)
    return found


def from_intersection_numbers(p: Cube) -> SchemeParameters:
    """Parameter set of a scheme given its counted intersection numbers.

    Relations keep their given order.  Idempotents are put in a
    Q-polynomial order when one exists, preferring the order in which
    ``Q_{j1}`` decreases along the relations (the same convention as
    :func:`from_krein_array`).
    """
    D = len(p) - 1
    p = tuple(tuple(tuple(as_fraction(x) for x in row) for row in plane) for plane in p)
    valencies = tuple(p[j][j][0] for j in range(D + 1))
    rows = _character_table(p)
    trivial = [r for r in rows if r == valencies]
    if len(trivial) != 1:
        raise DegenerateArray("trivial character not found")
    rows = trivial + [r for r in rows if r != valencies]
    P = ExactMatrix(rows)
    n = sum(valencies, Fraction(0))
    params = from_eigenmatrix(invert(P) * n)
    orderings = _q_polynomial_orderings(params.krein_parameters)
    if not orderings:
        return params

    def decreasing(order):
        col = params.Q.column(order[1])
        return all(a > b for a, b in zip(col, col[1:]))

    def key(order):
        return (decreasing(order), params.Q.column(order[1]))

    best = max(orderings, key=key)
    Q = ExactMatrix([[row[i] for i in best] for row in params.Q.rows])
    params = from_eigenmatrix(Q)
    return replace(params, krein_array=params.read_krein_array())


@dataclass
class FeasibilityReport:
    checks: dict[str, bool] = field(default_factory=dict)
    violations: list[tuple[str, tuple, Fraction]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def first_violation(self):
        return self.violations[0] if self.violations else None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": dict(self.checks),
            "violations": [
                {"quantity": name, "index": list(idx), "value": str(v)}
                for name, idx, v in self.violations
            ],
        }


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def feasibility_report(sp: SchemeParameters) -> FeasibilityReport:
    rep = FeasibilityReport()
    D = sp.D

    def check(name, items, ok):
        bad = [(name, idx, v) for idx, v in items if not ok(v)]
        rep.checks[name] = not bad
        rep.violations.extend(bad)

    check("vertex_count", [((), sp.vertex_count)], lambda v: _is_int(v) and v > 0)
    check("valencies", [((i,), v) for i, v in enumerate(sp.valencies)], lambda v: _is_int(v) and v > 0)
    check(
        "multiplicities",
        [((i,), v) for i, v in enumerate(sp.multiplicities)],
        lambda v: _is_int(v) and v > 0,
    )
    idx3 = list(itertools.product(range(D + 1), repeat=3))
    check(
        "intersection_numbers",
        [((i, j, k), sp.p(i, j, k)) for i, j, k in idx3],
        lambda v: _is_int(v) and v >= 0,
    )
    check("krein_parameters", [((i, j, k), sp.q(i, j, k)) for i, j, k in idx3], lambda v: v >= 0)
    return rep


@dataclass(frozen=True)
class KreinZeroSet:
    """Vanishing Krein parameters plus any predicted zero that is not zero."""

    triples: tuple[tuple[int, int, int], ...]
    mismatches: tuple[tuple[int, int, int], ...] = ()

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        return iter(self.triples)

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, item) -> bool:
        return tuple(item) in self.triples


def krein_zero_set(sp: SchemeParameters) -> KreinZeroSet:
    D = sp.D
    zeros = tuple(
        t
        for t in itertools.product(range(D + 1), repeat=3)
        if t != (0, 0, 0) and sp.q(*t) == 0
    )
    predicted = set()
    ka = sp.krein_array or sp.read_krein_array()
    if ka is not None:
        for i, j, k in itertools.product(range(D + 1), repeat=3):
            if not triangle_ok(i, j, k):
                predicted.add((i, j, k))
            if ka.is_q_antipodal() and i + j + k > 2 * D and not triangle_ok(D - i, D - j, D - k):
                predicted.add((i, j, k))
    mismatches = tuple(sorted(t for t in predicted if sp.q(*t) != 0))
    if mismatches:
        warnings.warn(f"{len(mismatches)} predicted Krein zeros do not vanish, e.g. {mismatches[0]}")
    return KreinZeroSet(zeros, mismatches)


def qant4_krein_array(n, q) -> KreinArray:
    """Krein array of the 4-class Q-antipodal scheme attached to a tight
    4-design in H(n, q).  ``n`` may be rational."""
    n, q = as_fraction(n), as_fraction(q)
    return KreinArray(
        ((n - 1) * (q - 1), (n - 2) * (q - 1), 2 * (q - 1), Fraction(1)),
        (Fraction(1), Fraction(2), (n - 2) * (q - 1), (n - 1) * (q - 1)),
    )


def noda_krein_array(r: int) -> KreinArray:
    """``{r^2-4, r^2-9, 10, 1; 1, 2, r^2-9, r^2-4}``, i.e. q = 6, n = (r^2+1)/5."""
    return qant4_krein_array(Fraction(r * r + 1, 5), 6)
