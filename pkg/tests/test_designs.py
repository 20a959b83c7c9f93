import itertools

import numpy as np
import pytest

from tightdesigns import designs, hamming
from tightdesigns.exactmath import ExactMatrix
from tightdesigns.scheme import KreinArray, from_krein_array, krein_zero_set


def test_golay_generator_minimum_distance():
    code = designs.span_code(designs.golay_generator(), 3)
    assert len(code) == 729
    weights = sorted({sum(1 for s in w if s) for w in code.words} - {0})
    assert weights[0] == 5


def test_dual_generator_is_orthogonal():
    G = designs.golay_generator()
    H = designs.dual_generator(G, 3)
    assert len(H) == 5
    assert all(sum(a * b for a, b in zip(g, h)) % 3 == 0 for g in G for h in H)


def test_span_code_rejects_composite():
    with pytest.raises(ValueError):
        designs.span_code([[1, 1]], 4)


def test_unknown_design():
    with pytest.raises(KeyError):
        designs.known_design("nope")


@pytest.mark.parametrize(
    "name, size, a",
    [("repetition-dual-5-2", 16, {2: 10, 4: 5}), ("golay-dual-11-3", 243, {6: 132, 9: 110})],
)
def test_known_design(name, size, a, request):
    C = designs.known_design(name)
    assert len(C) == size
    assert hamming.design_strength(C) == 4
    inner = hamming.inner_distribution(C)
    assert {j: int(inner.a[j]) for j in inner.degree_set} == a
    assert C == C.canonical()


def test_fibers(golay_dual):
    parts = designs.fibers(golay_dual)
    assert [len(p) for p in parts] == [81, 81, 81]
    for p in parts:
        assert hamming.design_strength(p) == 3
        assert hamming.inner_distribution(p).degree_set == (6, 9)


def test_h42_from_repetition(repetition_derived):
    sp = repetition_derived.parameters
    assert sp.krein_array == KreinArray.parse("4,3,2,1;1,2,3,4")
    assert sp.same_parameters(from_krein_array(sp.krein_array))


def test_golay_derived(golay_derived):
    sp = golay_derived.parameters
    assert len(golay_derived) == 243
    assert sp.krein_array == KreinArray.parse("20,18,4,1;1,2,18,20")
    row = np.bincount(golay_derived.relations[0], minlength=5)
    assert sp.valencies == tuple(row) == (1, 72, 60, 90, 20)
    # multiplicities are the first row of the closed-form Q with n = 11, q = 3
    assert sp.multiplicities == (1, 20, 180, 40, 2)
    assert sp.same_parameters(from_krein_array(sp.krein_array))
    assert not krein_zero_set(sp).mismatches


def test_derived_classes_are_shifted_distances(golay_derived):
    arr = np.array([w for _, w in golay_derived.labels])
    dist = (arr[:, None, :] != arr[None, :, :]).sum(axis=2)
    for cls, d in enumerate((0, 5, 6, 8, 9)):
        assert ((golay_derived.relations == cls) == (dist == d)).all()


@pytest.mark.parametrize("fixture", ["repetition_dual", "golay_dual"])
def test_fission(fixture, request):
    assert designs.fission_check(request.getfixturevalue(fixture)).ok


def test_not_a_scheme_witness():
    # path on 4 vertices with distance classes: not distance-regular
    R = [[0, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 1], [3, 2, 1, 0]]
    with pytest.raises(designs.NotAScheme) as exc:
        designs.scheme_from_relations(range(4), R)
    assert exc.value.witness is not None


def test_asymmetric_relation_rejected():
    with pytest.raises(designs.NotAScheme):
        designs.scheme_from_relations(range(2), [[0, 1], [2, 0]])


def test_not_tight(full_space):
    with pytest.raises(designs.NotTight):
        designs.derived_scheme(full_space(3, 2))


def test_t2s2_precondition():
    C = hamming.PointSet.of(4, 2, [(0, 0, 0, 0), (1, 0, 0, 0), (1, 1, 0, 0), (1, 1, 1, 0)])
    with pytest.raises(designs.PreconditionFailed):
        designs.t2s2_scheme(C)


def test_t2s2_counts_match_analytic(golay_dual):
    for part in designs.fibers(golay_dual):
        es = designs.t2s2_scheme(part)
        sp = es.parameters
        fp = hamming.fiber_subscheme_params(10, 3, 81, (6, 9), 3)
        for idx, al in enumerate((6, 9), start=1):
            assert fp.srg[al] == (sp.vertex_count, sp.valencies[idx], sp.p(idx, idx, idx), sp.p(idx, idx, 3 - idx))


def test_h42_explicit(h42):
    sp = h42.parameters
    assert sp.Q == hamming.krawtchouk_matrix(4, 2)
    assert sp.krein_array == KreinArray.parse("4,3,2,1;1,2,3,4")
