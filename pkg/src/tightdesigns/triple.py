"""Triple intersection numbers: linear system, integer feasibility, scans.

For vertices ``u, v, w`` with ``(v, w)`` in class ``U``, ``(u, w)`` in
class ``V`` and ``(u, v)`` in class ``W``, the unknown ``[i j k]`` counts
the vertices at relation ``i`` from ``u``, ``j`` from ``v`` and ``k`` from
``w``.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactmath import AffineSolutionSpace, ExactMatrix, Inconsistent, as_fraction, solve_affine
from .scheme import (
    SchemeParameters,
    feasibility_report,
    from_krein_array,
    krein_zero_set,
    noda_krein_array,
)

__all__ = [
    "TripleSystem",
    "AffineFamily",
    "FeasibilityVerdict",
    "boundary_value",
    "build_system",
    "solve_parametric",
    "closed_subsets",
    "structural_zeros",
    "integer_feasible",
    "brute_force_triples",
    "identity_violations",
    "scan_noda",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**6


def boundary_value(i: int, j: int, k: int, U: int, V: int, W: int) -> int:
    """``[i j k]`` when at least one index is 0 (the vertex is u, v or w)."""
    if i == 0:
        return int(j == W and k == V)
    if j == 0:
        return int(i == W and k == U)
    if k == 0:
        return int(i == V and j == U)
    raise ValueError("no index is zero")


@dataclass(frozen=True)
class TripleSystem:
    scheme: SchemeParameters
    triple_type: tuple[int, int, int]
    matrix: ExactMatrix
    rhs: tuple[Fraction, ...]
    unknowns: tuple[tuple[int, int, int], ...]
    sum_rows: int
    krein_triples: tuple[tuple[int, int, int], ...]

    def column(self, i: int, j: int, k: int) -> int:
        D = self.scheme.D
        return (i - 1) * D * D + (j - 1) * D + (k - 1)

    def residual(self, x: Sequence) -> tuple[Fraction, ...]:
        lhs = self.matrix @ x
        return tuple(a - b for a, b in zip(lhs, self.rhs))

    def interior(self, tensor) -> tuple[Fraction, ...]:
        """Unknown vector read from a full ``(D+1)^3`` tensor."""
        return tuple(Fraction(int(tensor[i][j][k])) for i, j, k in self.unknowns)


def build_system(sp: SchemeParameters, U: int, V: int, W: int, use_krein_zeros: bool = True) -> TripleSystem:
    D = sp.D
    unknowns = tuple(itertools.product(range(1, D + 1), repeat=3))
    col = {t: idx for idx, t in enumerate(unknowns)}
    rows, rhs = [], []

    def bv(i, j, k):
        return boundary_value(i, j, k, U, V, W)

    # sum over the first, second and third index respectively
    for a, b in itertools.product(range(1, D + 1), repeat=2):
        for pos, target in ((0, sp.p(a, b, U)), (1, sp.p(a, b, V)), (2, sp.p(a, b, W))):
            row = [Fraction(0)] * len(unknowns)
            const = Fraction(0)
            for l in range(D + 1):
                idx = [a, b]
                idx.insert(pos, l)
                t = tuple(idx)
                if l == 0:
                    const += bv(*t)
                else:
                    row[col[t]] += 1
            rows.append(row)
            rhs.append(target - const)
    sum_rows = len(rows)
    used = ()
    if use_krein_zeros:
        Q = sp.Q
        used = tuple(krein_zero_set(sp))
        for i, j, k in used:
            row = [Fraction(0)] * len(unknowns)
            const = Fraction(0)
            for r, s, t in itertools.product(range(D + 1), repeat=3):
                coef = Q[r, i] * Q[s, j] * Q[t, k]
                if not coef:
                    continue
                if r and s and t:
                    row[col[(r, s, t)]] += coef
                else:
                    const += coef * bv(r, s, t)
            rows.append(row)
            rhs.append(-const)
    return TripleSystem(sp, (U, V, W), ExactMatrix(rows), tuple(rhs), unknowns, sum_rows, used)


@dataclass(frozen=True)
class AffineFamily:
    system: TripleSystem
    solution_space: AffineSolutionSpace
    bounds: tuple[Fraction, ...]
    forced_zeros: tuple[tuple[int, int, int], ...] = ()

    @property
    def dimension(self) -> int:
        return self.solution_space.dimension

    def point(self, params: Sequence = ()) -> tuple[Fraction, ...]:
        return self.solution_space.point(params)

    def contains(self, x: Sequence) -> bool:
        return self.solution_space.coordinates(x) is not None

    def expression(self, i: int, j: int, k: int) -> tuple[Fraction, tuple[Fraction, ...]]:
        """``[i j k]`` as ``(constant, coefficients of the free unknowns)``."""
        c = self.system.column(i, j, k)
        return self.solution_space.particular[c], tuple(v[c] for v in self.solution_space.basis)

    def free_unknowns(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(self.system.unknowns[f] for f in self.solution_space.free_indices)


def closed_subsets(sp: SchemeParameters) -> list[frozenset[int]]:
    """Proper nontrivial unions of classes closed under composition
    (the imprimitivity systems generated by a single class)."""
    D = sp.D
    found = []
    for start in range(1, D + 1):
        block = {0, start}
        grew = True
        while grew:
            new = {k for a in block for b in block for k in range(D + 1) if sp.p(a, b, k)} - block
            block |= new
            grew = bool(new)
        if len(block) <= D and frozenset(block) not in found:
            found.append(frozenset(block))
    return found


def structural_zeros(sp: SchemeParameters, U: int, V: int, W: int) -> list[tuple[int, int, int]]:
    """Unknowns forced to vanish by an imprimitivity system.

    For a closed set ``I`` of classes, "related by a class in I" is an
    equivalence relation on the vertices; ``[i j k]`` is zero whenever the
    six relations among ``u, v, w, x`` would break its transitivity.
    """
    D = sp.D
    out = []
    for i, j, k in itertools.product(range(1, D + 1), repeat=3):
        for block in closed_subsets(sp):
            # points u, v, w, x -> 0, 1, 2, 3
            same = {(0, 3): i in block, (1, 3): j in block, (2, 3): k in block,
                    (1, 2): U in block, (0, 2): V in block, (0, 1): W in block}
            rel = lambda a, b: a == b or same[(min(a, b), max(a, b))]  # noqa: E731
            if any(rel(a, b) and rel(b, c) and not rel(a, c) for a, b, c in itertools.permutations(range(4), 3)):
                out.append((i, j, k))
                break
    return out


PIN_POLICIES = ("structural", "bounds", "none")


def solve_parametric(ts: TripleSystem, pin: str = "structural") -> AffineFamily:
    """Exact solution family of the system; raises :class:`Inconsistent`.

    ``pin`` selects unknowns fixed to 0 before solving: ``"structural"``
    pins those ruled out by an imprimitivity system, ``"bounds"`` pins every
    unknown whose bound ``min(p_jk^U, p_ik^V, p_ij^W)`` is 0, ``"none"``
    pins nothing.  Any nonnegative solution satisfies either set of pins,
    and :func:`integer_feasible` enforces the bounds in all cases.
    """
    sp = ts.scheme
    U, V, W = ts.triple_type
    bounds = tuple(min(sp.p(j, k, U), sp.p(i, k, V), sp.p(i, j, W)) for i, j, k in ts.unknowns)
    if pin == "structural":
        zeros = [ts.column(*t) for t in structural_zeros(sp, U, V, W)]
    elif pin == "bounds":
        zeros = [c for c, bound in enumerate(bounds) if bound == 0]
    elif pin == "none":
        zeros = []
    else:
        raise ValueError(f"unknown pin policy {pin!r}")
    width = len(ts.unknowns)
    # pinned rows first: the reduced echelon form does not depend on row order
    A = ExactMatrix([[int(c == z) for c in range(width)] for z in zeros] + list(ts.matrix.rows))
    b = (Fraction(0),) * len(zeros) + tuple(ts.rhs)
    space = solve_affine(A, b)
    return AffineFamily(ts, space, bounds, tuple(ts.unknowns[z] for z in zeros))


@dataclass
class FeasibilityVerdict:
    status: str  # "feasible" | "infeasible" | "undecided"
    reason: str | None = None
    dimension: int = 0
    witnesses: list[tuple[int, ...]] = field(default_factory=list)
    assignments: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "dimension": self.dimension,
            "witnesses": [list(w) for w in self.witnesses],
        }


def _congruence(c: Fraction, d: Fraction) -> tuple[int, int] | None:
    """Integers ``t`` with ``c + d t`` integral, as ``t = r (mod m)``;
    ``None`` if there are none."""
    L = math.lcm(c.denominator, d.denominator)
    a, b = int(d * L), int(-c * L)
    g = math.gcd(a, L)
    if b % g:
        return None
    a, b, m = a // g, b // g, L // g
    if m == 1:
        return 0, 1
    return b * pow(a, -1, m) % m, m


def _crt(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int] | None:
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    l = m1 // g * m2
    k = (r2 - r1) // g * pow(m1 // g, -1, m2 // g) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * k) % l, l


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _as_int_point(x: Sequence[Fraction], bounds: Sequence[Fraction]) -> tuple[int, ...] | None:
    if all(v.denominator == 1 and 0 <= v <= b for v, b in zip(x, bounds)):
        return tuple(int(v) for v in x)
    return None


def _recheck(fam: AffineFamily, point: tuple[int, ...]) -> None:
    if any(fam.system.residual(point)) or any(point[fam.system.column(*t)] for t in fam.forced_zeros):
        raise AssertionError("witness does not satisfy the system")


def integer_feasible(fam: AffineFamily, budget: int = DEFAULT_BUDGET) -> FeasibilityVerdict:
    """Decide whether the family contains a nonnegative integral point
    within the per-unknown bounds."""
    space = fam.solution_space
    dim = space.dimension
    bounds = fam.bounds
    if dim == 0:
        x = space.particular
        if any(v.denominator != 1 for v in x):
            return FeasibilityVerdict("infeasible", "no-integral-point", 0)
        pt = _as_int_point(x, bounds)
        if pt is None:
            return FeasibilityVerdict("infeasible", "no-nonnegative-integral-point", 0)
        _recheck(fam, pt)
        return FeasibilityVerdict("feasible", None, 0, [()], [pt])
    if dim == 1:
        (vec,) = space.basis
        residue, modulus = 0, 1
        lo, hi = Fraction(0), None
        for c, d, b in zip(space.particular, vec, bounds):
            if d == 0:
                if c.denominator != 1:
                    return FeasibilityVerdict("infeasible", "no-integral-point", 1)
                continue
            cong = _congruence(c, d)
            merged = cong and _crt(residue, modulus, *cong)
            if merged is None:
                return FeasibilityVerdict("infeasible", "no-integral-point", 1)
            residue, modulus = merged
            # 0 <= c + d t <= b
            ends = sorted(((0 - c) / d, (b - c) / d))
            lo = max(lo, ends[0])
            hi = ends[1] if hi is None else min(hi, ends[1])
        witnesses, points = [], []
        if hi is not None:
            start = _ceil(lo)
            start += (residue - start) % modulus
            for t in range(start, _floor(hi) + 1, modulus):
                pt = _as_int_point(space.point((t,)), bounds)
                if pt is not None:
                    _recheck(fam, pt)
                    witnesses.append((t,))
                    points.append(pt)
        if not witnesses:
            return FeasibilityVerdict("infeasible", "no-nonnegative-integral-point", 1)
        return FeasibilityVerdict("feasible", None, 1, witnesses, points)
    if dim == 2:
        ranges = [range(0, int(bounds[f]) + 1) for f in space.free_indices]
        if len(ranges[0]) * len(ranges[1]) > budget:
            return FeasibilityVerdict("undecided", "budget-exceeded", 2)
        witnesses, points = [], []
        any_integral = False
        for params in itertools.product(*ranges):
            x = space.point(params)
            if all(v.denominator == 1 for v in x):
                any_integral = True
                pt = _as_int_point(x, bounds)
                if pt is not None:
                    _recheck(fam, pt)
                    witnesses.append(params)
                    points.append(pt)
        if witnesses:
            return FeasibilityVerdict("feasible", None, 2, witnesses, points)
        reason = "no-nonnegative-integral-point" if any_integral else "no-integral-point"
        return FeasibilityVerdict("infeasible", reason, 2)
    return FeasibilityVerdict("undecided", "dimension", dim)


def brute_force_triples(es, u: int, v: int, w: int) -> np.ndarray:
    """Counted ``[i j k]`` for all ``0 <= i, j, k <= D``."""
    R = es.relations
    D = es.D
    out = np.zeros((D + 1,) * 3, dtype=np.int64)
    np.add.at(out, (R[u], R[v], R[w]), 1)
    return out


def identity_violations(sp: SchemeParameters, tensor, U: int, V: int, W: int) -> list[str]:
    """Check a full counted tensor against the sum equations (with boundary
    values) and every vanishing-Krein equation, directly."""
    D = sp.D
    T = [[[Fraction(int(tensor[i][j][k])) for k in range(D + 1)] for j in range(D + 1)] for i in range(D + 1)]
    bad = []
    rng = range(D + 1)
    for a, b in itertools.product(rng, repeat=2):
        if sum(T[l][a][b] for l in rng) != sp.p(a, b, U):
            bad.append(f"sum_l [l {a} {b}] != p_{a}{b}^{U}")
        if sum(T[a][l][b] for l in rng) != sp.p(a, b, V):
            bad.append(f"sum_l [{a} l {b}] != p_{a}{b}^{V}")
        if sum(T[a][b][l] for l in rng) != sp.p(a, b, W):
            bad.append(f"sum_l [{a} {b} l] != p_{a}{b}^{W}")
    Q = sp.Q
    for i, j, k in krein_zero_set(sp):
        total = sum(
            (Q[r, i] * Q[s, j] * Q[t, k] * T[r][s][t] for r, s, t in itertools.product(rng, repeat=3) if T[r][s][t]),
            Fraction(0),
        )
        if total:
            bad.append(f"Krein equation ({i},{j},{k}) gives {total}")
    return bad


@dataclass
class NodaRow:
    r: int
    status: str
    reason: str | None = None
    dimension: int | None = None
    p111: Fraction | None = None
    vertex_count: Fraction | None = None
    detail: str = ""
    witnesses: int = 0

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "status": self.status,
            "reason": self.reason,
            "dimension": self.dimension,
            "p111": None if self.p111 is None else str(self.p111),
            "vertex_count": None if self.vertex_count is None else str(self.vertex_count),
            "detail": self.detail,
            "witnesses": self.witnesses,
        }


def noda_row(r: int) -> NodaRow:
    try:
        sp = from_krein_array(noda_krein_array(r))
    except ArithmeticError as exc:
        return NodaRow(r, "rejected", "derivation-failed", detail=str(exc))
    report = feasibility_report(sp)
    if not report.passed:
        name, idx, value = report.first_violation()
        return NodaRow(
            r, "rejected", "infeasible-parameters", vertex_count=sp.vertex_count,
            detail=f"{name}{list(idx)} = {value}",
        )
    p111 = sp.p(1, 1, 1)
    if p111 <= 0:
        return NodaRow(r, "rejected", "triple-type-absent", p111=p111, vertex_count=sp.vertex_count)
    ts = build_system(sp, 1, 1, 1, use_krein_zeros=True)
    try:
        fam = solve_parametric(ts)
    except Inconsistent as exc:
        return NodaRow(r, "infeasible", "inconsistent-system", p111=p111, vertex_count=sp.vertex_count, detail=str(exc))
    verdict = integer_feasible(fam)
    c, coeffs = fam.expression(1, 1, 1)
    detail = f"[1 1 1] = {c}" + "".join(f" {'+' if d >= 0 else '-'} {abs(d)}*{list(f)}" for d, f in zip(coeffs, fam.free_unknowns()) if d)
    return NodaRow(
        r, verdict.status, verdict.reason, verdict.dimension, p111, sp.vertex_count, detail, len(verdict.witnesses)
    )


def scan_noda(r_values: Sequence[int], jobs: int = 1) -> list[NodaRow]:
    """Per-r triple-intersection analysis of the Krein array
    ``{r^2-4, r^2-9, 10, 1; 1, 2, r^2-9, r^2-4}`` at the triple type (1, 1, 1)."""
    r_values = list(r_values)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(noda_row, r_values))
    return [noda_row(r) for r in r_values]
