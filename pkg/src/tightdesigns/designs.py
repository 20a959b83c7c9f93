"""The two known tight 4-designs and the schemes they carry.

Every scheme built here is checked by exhaustive counting on its vertex
set; nothing is taken on trust from the construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hamming import HammingContext, PointSet, design_strength, inner_distribution, rao_bound
from .scheme import (
    SchemeParameters,
    feasibility_report,
    from_intersection_numbers,
    qant4_krein_array,
)

__all__ = [
    "ExplicitScheme",
    "NotAScheme",
    "NotTight",
    "KreinMismatch",
    "PreconditionFailed",
    "DESIGN_NAMES",
    "span_code",
    "dual_generator",
    "golay_generator",
    "known_design",
    "fibers",
    "scheme_from_relations",
    "t2s2_scheme",
    "derived_scheme",
    "fission_check",
]


class NotAScheme(ValueError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotTight(ValueError):
    pass


class KreinMismatch(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


def _rref_mod(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    M = [[x % p for x in row] for row in rows]
    ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def span_code(generator: Sequence[Sequence[int]], q: int) -> PointSet:
    """All linear combinations of the generator rows over GF(q), q prime."""
    if q < 2 or any(q % d == 0 for d in range(2, int(q**0.5) + 1)):
        raise ValueError(f"q = {q} is not prime")
    n = len(generator[0])
    basis, _ = _rref_mod(generator, q)
    if not basis:
        return PointSet.of(n, q, [(0,) * n])
    G = np.array(basis, dtype=np.int64)
    coeffs = np.array(list(itertools.product(range(q), repeat=len(basis))), dtype=np.int64)
    words = (coeffs @ G) % q
    return PointSet.of(n, q, map(tuple, words.tolist()))


def dual_generator(generator: Sequence[Sequence[int]], q: int) -> list[list[int]]:
    """Generator of the dual code (the null space mod q)."""
    n = len(generator[0])
    basis, pivots = _rref_mod(generator, q)
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        vec = [0] * n
        vec[f] = 1
        for row, c in zip(basis, pivots):
            vec[c] = -row[f] % q
        out.append(vec)
    return out


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def golay_generator() -> list[list[int]]:
    """Generator of the [11, 6, 5] ternary Golay code.

    ``[I_6 | S]`` with ``S`` the Paley conference matrix of order 6 (built
    from quadratic residues mod 5) generates the extended [12, 6, 6] code;
    dropping the last coordinate punctures it to length 11.
    """
    S = [[0] + [1] * 5] + [[1] + [_legendre(j - i, 5) for j in range(5)] for i in range(5)]
    G = [[int(i == j) for j in range(6)] + [x % 3 for x in S[i]] for i in range(6)]
    return [row[:11] for row in G]


DESIGN_NAMES = ("repetition-dual-5-2", "golay-dual-11-3")


def known_design(name: str) -> PointSet:
    if name == "repetition-dual-5-2":
        C = span_code(dual_generator([[1] * 5], 2), 2)
        n, q = 5, 2
    elif name == "golay-dual-11-3":
        C = span_code(dual_generator(golay_generator(), 3), 3)
        n, q = 11, 3
    else:
        raise KeyError(f"unknown design {name!r}; choose from {', '.join(DESIGN_NAMES)}")
    C = C.canonical()
    t = design_strength(C)
    if t != 4 or len(C) != rao_bound(n, q, 2):
        raise RuntimeError(f"{name}: construction failed its gate (strength {t}, size {len(C)})")
    return C


def fibers(C: PointSet) -> list[PointSet]:
    """Split ``C`` by the symbol in the first coordinate, deleting it."""
    if C.n < 2:
        raise ValueError("need n >= 2 to delete a coordinate")
    ctx = HammingContext(C.n - 1, C.q)
    return [PointSet(ctx, tuple(w[1:] for w in C.words if w[0] == s)) for s in range(C.q)]


@dataclass(frozen=True, eq=False)
class ExplicitScheme:
    labels: tuple
    relations: np.ndarray
    parameters: SchemeParameters

    @property
    def D(self) -> int:
        return self.parameters.D

    def __len__(self) -> int:
        return len(self.labels)

    def adjacency(self, i: int) -> np.ndarray:
        return (self.relations == i).astype(np.int64)


def scheme_from_relations(labels: Sequence, relation_map) -> ExplicitScheme:
    """Verify the association-scheme axioms on an explicit relation matrix.

    ``relation_map[u][v]`` is the class index of the pair ``(u, v)``.
    Intersection numbers are read off from ``A_i A_j`` and must be constant
    on every class; the remaining parameters come from those counts.
    """
    R = np.asarray(relation_map, dtype=np.int64)
    N = len(labels)
    if R.shape != (N, N):
        raise ValueError(f"relation map has shape {R.shape}, expected {(N, N)}")
    if not (R == R.T).all():
        u, v = map(int, np.argwhere(R != R.T)[0])
        raise NotAScheme(f"relation map is not symmetric at {(u, v)}", (u, v))
    off = ~np.eye(N, dtype=bool)
    if (np.diag(R) != 0).any() or (R[off] == 0).any():
        raise NotAScheme("relation 0 must be exactly the diagonal")
    D = int(R.max())
    present = set(np.unique(R).tolist())
    if present != set(range(D + 1)):
        raise NotAScheme(f"empty classes {sorted(set(range(D + 1)) - present)}")
    A = [(R == i).astype(np.int64) for i in range(D + 1)]
    masks = A
    p = [[[0] * (D + 1) for _ in range(D + 1)] for _ in range(D + 1)]
    for i in range(D + 1):
        for j in range(D + 1):
            prod = A[i] @ A[j]
            for k in range(D + 1):
                vals = prod[masks[k].astype(bool)]
                if (vals != vals[0]).any():
                    first = np.argwhere(masks[k].astype(bool) & (prod != vals[0]))[0]
                    u, v = map(int, first)
                    raise NotAScheme(
                        f"(A_{i} A_{j})[u, v] not constant on class {k}: witness u={u}, v={v}",
                        (u, v, i, j),
                    )
                p[i][j][k] = int(vals[0])
    return ExplicitScheme(tuple(labels), R, from_intersection_numbers(p))


def _distance_scheme(labels, dist: np.ndarray, classes: dict[int, int]) -> ExplicitScheme:
    lookup = np.full(int(dist.max()) + 1, -1, dtype=np.int64)
    for d, c in classes.items():
        lookup[d] = c
    R = lookup[dist]
    if (R < 0).any():
        u, v = map(int, np.argwhere(R < 0)[0])
        raise NotAScheme(f"unexpected distance {int(dist[u, v])} between {u} and {v}", (u, v))
    return scheme_from_relations(labels, R)


def t2s2_scheme(C: PointSet) -> ExplicitScheme:
    """Distance scheme on a design of strength ``t >= 2s - 2``."""
    degrees = inner_distribution(C).degree_set
    s = len(degrees)
    t = design_strength(C)
    if s < 1 or t < 2 * s - 2:
        raise PreconditionFailed(f"strength {t} < 2 * degree - 2 = {2 * s - 2}")
    classes = {0: 0, **{al: i for i, al in enumerate(degrees, start=1)}}
    return _distance_scheme(C.words, C.distance_matrix(), classes)


def _tight_degree_set(C: PointSet) -> tuple[int, int]:
    t = design_strength(C)
    if t < 4 or len(C) != rao_bound(C.n, C.q, 2):
        raise NotTight(f"strength {t}, size {len(C)} vs Rao bound {rao_bound(C.n, C.q, 2)}")
    degrees = inner_distribution(C).degree_set
    if len(degrees) != 2:
        raise NotTight(f"degree set {degrees} does not have two elements")
    return degrees


def derived_scheme(C: PointSet) -> ExplicitScheme:
    """The 4-class Q-antipodal scheme on the fibers of a tight 4-design.

    Vertices are labelled ``(fiber symbol, shortened word)``; classes 1..4
    are the distances ``a1 - 1, a1, a2 - 1, a2`` in H(n-1, q).
    """
    a1, a2 = _tight_degree_set(C)
    parts = fibers(C)
    for s, part in enumerate(parts):
        if len(part) * C.q != len(C):
            raise NotTight(f"fiber {s} has {len(part)} words, expected {len(C) // C.q}")
    labels = tuple((s, w) for s, part in enumerate(parts) for w in part.words)
    arr = np.array([w for _, w in labels], dtype=np.int64)
    dist = (arr[:, None, :] != arr[None, :, :]).sum(axis=2)
    es = _distance_scheme(labels, dist, {0: 0, a1 - 1: 1, a1: 2, a2 - 1: 3, a2: 4})
    expected = qant4_krein_array(C.n, C.q)
    got = es.parameters.krein_array
    if got != expected:
        raise KreinMismatch(f"counted Krein array {got} differs from {expected}")
    report = feasibility_report(es.parameters)
    if not report.passed:
        raise KreinMismatch(f"derived parameters infeasible: {report.first_violation()}")
    return es


@dataclass(frozen=True)
class FissionVerdict:
    ok: bool
    witness: tuple | None = None


def fission_check(C: PointSet) -> FissionVerdict:
    """Deleting the first coordinate maps S_i onto the union of the derived
    classes 2i-1 and 2i."""
    base = t2s2_scheme(C)
    if base.D < 2:
        raise PreconditionFailed("need the 2-class scheme of a tight 4-design")
    derived = derived_scheme(C)
    pos = {lab: idx for idx, lab in enumerate(derived.labels)}
    image = np.array([pos[(w[0], w[1:])] for w in base.labels])
    mapped = derived.relations[np.ix_(image, image)]
    for i in range(base.D + 1):
        allowed = {0} if i == 0 else {2 * i - 1, 2 * i}
        here = mapped[base.relations == i]
        bad = [int(x) for x in np.unique(here) if int(x) not in allowed]
        if bad:
            u, v = map(int, np.argwhere((base.relations == i) & (mapped == bad[0]))[0])
            return FissionVerdict(False, (u, v, i, bad[0]))
        if i and set(np.unique(here).tolist()) != allowed:
            return FissionVerdict(False, (i, sorted(allowed - set(np.unique(here).tolist()))))
    return FissionVerdict(True)
