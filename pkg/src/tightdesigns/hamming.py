"""Krawtchouk polynomials and design tests in the Hamming scheme H(n, q)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .exactmath import ExactMatrix, as_fraction, solve_affine
from .scheme import SchemeParameters, from_eigenmatrix

__all__ = [
    "HammingContext",
    "PointSet",
    "InnerDistribution",
    "OracleMismatch",
    "NonIntegral",
    "binomial",
    "krawtchouk",
    "krawtchouk_matrix",
    "rao_bound",
    "inner_distribution",
    "dual_distribution",
    "strength_by_transform",
    "strength_by_counting",
    "design_strength",
    "wilson_zeros",
    "noda_congruences",
    "fiber_subscheme_params",
]


class OracleMismatch(AssertionError):
    """Transform-based and counting-based strengths disagree."""


class NonIntegral(ValueError):
    pass


@dataclass(frozen=True)
class HammingContext:
    n: int
    q: int

    def __post_init__(self):
        if self.q < 2 or self.n < 1:
            raise ValueError(f"invalid Hamming scheme H({self.n}, {self.q})")


@dataclass(frozen=True)
class PointSet:
    """Distinct words of length ``n`` over ``{0, ..., q-1}``."""

    context: HammingContext
    words: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n, q = self.context.n, self.context.q
        words = tuple(tuple(int(s) for s in w) for w in self.words)
        for idx, w in enumerate(words):
            if len(w) != n:
                raise ValueError(f"word {idx} has length {len(w)}, expected {n}")
            if any(not 0 <= s < q for s in w):
                raise ValueError(f"word {idx} has a symbol outside 0..{q - 1}")
        if len(set(words)) != len(words):
            raise ValueError("duplicate words")
        object.__setattr__(self, "words", words)

    @classmethod
    def of(cls, n: int, q: int, words) -> "PointSet":
        return cls(HammingContext(n, q), tuple(words))

    @property
    def n(self) -> int:
        return self.context.n

    @property
    def q(self) -> int:
        return self.context.q

    def __len__(self) -> int:
        return len(self.words)

    def array(self) -> np.ndarray:
        return np.array(self.words, dtype=np.int64).reshape(len(self.words), self.n)

    def distance_matrix(self) -> np.ndarray:
        arr = self.array()
        return (arr[:, None, :] != arr[None, :, :]).sum(axis=2)

    def canonical(self) -> "PointSet":
        return PointSet(self.context, tuple(sorted(self.words)))


@dataclass(frozen=True)
class InnerDistribution:
    a: tuple[Fraction, ...]

    @property
    def size(self) -> Fraction:
        return sum(self.a, Fraction(0))

    @property
    def degree_set(self) -> tuple[int, ...]:
        return tuple(j for j, x in enumerate(self.a) if j > 0 and x)

    @property
    def degree(self) -> int:
        return len(self.degree_set)


def binomial(x: int, j: int) -> int:
    """``C(x, j)`` as a polynomial in ``x``; valid for negative ``x``."""
    if j < 0:
        return 0
    if x >= 0:
        return math.comb(x, j)
    num = 1
    for t in range(j):
        num *= x - t
    return num // math.factorial(j)


def krawtchouk(n: int, q: int, i: int, x: int) -> Fraction:
    if not 0 <= i <= n:
        raise ValueError(f"degree {i} outside 0..{n}")
    return Fraction(
        sum((-1) ** j * (q - 1) ** (i - j) * binomial(x, j) * binomial(n - x, i - j) for j in range(i + 1))
    )


def krawtchouk_matrix(n: int, q: int) -> ExactMatrix:
    """Second eigenmatrix ``(K_{n,q,j}(i))`` of H(n, q)."""
    return ExactMatrix([[krawtchouk(n, q, j, i) for j in range(n + 1)] for i in range(n + 1)])


def rao_bound(n: int, q: int, e: int) -> int:
    if not 0 <= e <= n:
        raise ValueError(f"e = {e} outside 0..{n}")
    return sum(math.comb(n, k) * (q - 1) ** k for k in range(e + 1))


def inner_distribution(C: PointSet) -> InnerDistribution:
    if not len(C):
        raise ValueError("empty point set")
    counts = np.bincount(C.distance_matrix().ravel(), minlength=C.n + 1)
    return InnerDistribution(tuple(Fraction(int(c), len(C)) for c in counts))


def dual_distribution(C: PointSet) -> tuple[Fraction, ...]:
    """``B_k = sum_j a_j K_k(j)`` for ``k = 0..n``."""
    a = inner_distribution(C).a
    n, q = C.n, C.q
    return tuple(
        sum((a[j] * krawtchouk(n, q, k, j) for j in range(n + 1) if a[j]), Fraction(0))
        for k in range(n + 1)
    )


def strength_by_transform(C: PointSet) -> int:
    B = dual_distribution(C)
    t = 0
    while t < C.n and B[t + 1] == 0:
        t += 1
    return t


def _balanced(arr: np.ndarray, cols: Sequence[int], q: int) -> bool:
    N = arr.shape[0]
    cells = q ** len(cols)
    if N % cells:
        return False
    codes = np.zeros(N, dtype=np.int64)
    for c in cols:
        codes = codes * q + arr[:, c]
    counts = np.bincount(codes, minlength=cells)
    return bool((counts == N // cells).all())


def strength_by_counting(C: PointSet, max_t: int = 4) -> int:
    """Largest ``t <= max_t`` such that every ``t`` columns are balanced."""
    arr = C.array()
    t = 0
    while t < min(max_t, C.n):
        if not all(_balanced(arr, cols, C.q) for cols in itertools.combinations(range(C.n), t + 1)):
            break
        t += 1
    return t


def design_strength(C: PointSet, verify_up_to: int = 4) -> int:
    """Strength of ``C`` from its dual distribution, cross-checked by direct
    column counting for strengths up to ``verify_up_to``."""
    t = strength_by_transform(C)
    counted = strength_by_counting(C, verify_up_to)
    if counted != min(t, verify_up_to, C.n):
        raise OracleMismatch(f"dual distribution gives strength {t}, column counting gives {counted}")
    return t


class WilsonZeros(NamedTuple):
    zeros: tuple[int, ...]
    has_e_zeros: bool


def wilson_zeros(n: int, q: int, e: int) -> WilsonZeros:
    if not 1 <= e <= n:
        raise ValueError(f"e = {e} outside 1..{n}")
    zeros = tuple(
        x for x in range(1, n + 1) if sum(krawtchouk(n, q, j, x) for j in range(e + 1)) == 0
    )
    return WilsonZeros(zeros, len(zeros) == e)


@dataclass(frozen=True)
class NodaVerdict:
    a: int
    conditions: dict[str, bool]
    parameters: tuple[int, int, int] | None

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def failed(self) -> list[str]:
        return [name for name, ok in self.conditions.items() if not ok]


def noda_congruences(a: int) -> NodaVerdict:
    """Arithmetic conditions on the third family of tight 4-designs."""
    if a < 1:
        raise ValueError("a must be positive")
    conditions = {
        "a = 0 (mod 3)": a % 3 == 0,
        "a = +-1 (mod 5)": a % 5 in (1, 4),
        "a = 5 (mod 16)": a % 16 == 5,
        "(9a^2+1)/5 integral": (9 * a * a + 1) % 5 == 0,
    }
    params = None
    if all(conditions.values()):
        s = 9 * a * a
        params = (s * (s - 1) // 2, (s + 1) // 5, 6)
    return NodaVerdict(a, conditions, params)


@dataclass(frozen=True)
class FiberParameters:
    inner: dict[int, Fraction]
    scheme: SchemeParameters
    srg: dict[int, tuple[int, int, int, int]]


def fiber_subscheme_params(n: int, q: int, size: int, degree_set, strength: int) -> FiberParameters:
    """Parameters of the 2-class scheme carried by a design of degree 2.

    Returns the inner distribution on the two distances and the
    strongly-regular-graph parameters ``(v, k, lambda, mu)`` of each
    distance graph.
    """
    alphas = tuple(sorted(set(degree_set)))
    if len(alphas) != 2 or len(tuple(degree_set)) != 2:
        raise ValueError("degree set must contain two distinct distances")
    if strength < 2:
        raise ValueError("strength must be at least 2")
    K = lambda i, x: krawtchouk(n, q, i, x)  # noqa: E731
    A = ExactMatrix([[K(k, al) for al in alphas] for k in (1, 2)])
    sol = solve_affine(A, [-K(k, 0) for k in (1, 2)])
    if sol.dimension:
        raise NonIntegral("moment system is not determined")
    inner = dict(zip(alphas, sol.particular))
    size = as_fraction(size)

    def f(z):
        prod = size
        for al in alphas:
            prod *= 1 - Fraction(z, al)
        return prod - K(0, z) - K(1, z)

    points = (0,) + alphas
    Q = ExactMatrix([[K(0, x), K(1, x), f(x)] for x in points])
    sp = from_eigenmatrix(Q)
    srg = {}
    for idx, al in enumerate(alphas, start=1):
        v, k = sp.vertex_count, sp.valencies[idx]
        lam, mu = sp.p(idx, idx, idx), sp.p(idx, idx, 3 - idx)
        srg[al] = (v, k, lam, mu)
    values = list(inner.values()) + [x for t in srg.values() for x in t]
    if any(x.denominator != 1 or x < 0 for x in values) or sp.vertex_count != size:
        raise NonIntegral(f"non-integral or negative parameters: inner {inner}, srg {srg}")
    srg = {al: tuple(int(x) for x in t) for al, t in srg.items()}
    return FiberParameters(inner, sp, srg)
