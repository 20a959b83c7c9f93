import itertools
import math
import warnings
from fractions import Fraction as F

import pytest

from tightdesigns import hamming
from tightdesigns.exactmath import ExactMatrix
from tightdesigns.scheme import (
    DegenerateArray,
    KreinArray,
    feasibility_report,
    from_eigenmatrix,
    from_intersection_numbers,
    from_krein_array,
    krein_zero_set,
    noda_krein_array,
    qant4_krein_array,
    triangle_ok,
)

H42 = KreinArray.parse("4,3,2,1;1,2,3,4")
GOLAY = KreinArray.parse("20,18,4,1;1,2,18,20")


def noda_Q(r):
    return ExactMatrix(
        [
            [1, r * r - 4, F((r * r - 4) * (r * r - 9), 2), 5 * (r * r - 4), 5],
            [1, r + 2, 0, -r - 2, -1],
            [1, r - 4, -6 * (r - 3), 5 * (r - 4), 5],
            [1, -r + 2, 0, r - 2, -1],
            [1, -r - 4, 6 * (r + 3), -5 * (r + 4), 5],
        ]
    )


def qant4_Q(n, q):
    d = math.isqrt(q * q + 4 * (n - 2) * (q - 1))
    assert d * d == q * q + 4 * (n - 2) * (q - 1)
    h = F(1, 2)
    return ExactMatrix(
        [
            [1, (n - 1) * (q - 1), h * (n * n - 3 * n + 2) * (q - 1) ** 2, (n - 1) * (q - 1) ** 2, q - 1],
            [1, h * (q - 2 + d), 0, -h * (q - 2 + d), -1],
            [1, h * (-q - 2 + d), h * q * (q - d), h * (q - 1) * (-q - 2 + d), q - 1],
            [1, h * (q - 2 - d), 0, -h * (q - 2 - d), -1],
            [1, h * (-q - 2 - d), h * q * (q + d), h * (q - 1) * (-q - 2 - d), q - 1],
        ]
    )


def check_invariants(sp):
    """P Q = nI, row sums, symmetry identities, Krein read-back."""
    n, D = sp.vertex_count, sp.D
    rng = range(D + 1)
    assert sp.P @ sp.Q == ExactMatrix.identity(D + 1) * n
    assert sum(sp.valencies) == n and sum(sp.multiplicities) == n
    for i, k in itertools.product(rng, repeat=2):
        assert sum(sp.p(i, j, k) for j in rng) == sp.valencies[i]
        assert sum(sp.q(i, j, k) for j in rng) == sp.multiplicities[i]
    for i, j, k in itertools.product(rng, repeat=3):
        assert sp.valencies[k] * sp.p(i, j, k) == sp.valencies[i] * sp.p(k, j, i)
        assert sp.p(i, j, k) == sp.p(j, i, k)
        assert sp.multiplicities[k] * sp.q(i, j, k) == sp.multiplicities[i] * sp.q(k, j, i)
    assert sp.read_krein_array() == sp.krein_array


def test_parse_and_format():
    ka = KreinArray.parse("{4, 3, 2, 1; 1, 2, 3, 4}")
    assert ka == H42
    assert str(ka) == "{4, 3, 2, 1; 1, 2, 3, 4}"
    assert ka.compact() == "4,3,2,1;1,2,3,4"
    assert ka.a(2) == 4 - 2 - 2


@pytest.mark.parametrize("text", ["4,3;1", "4,3", "4,0;1,2", "a,b;c,d"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        KreinArray.parse(text)


def test_nonunit_c1_warns():
    with pytest.warns(UserWarning):
        KreinArray((2,), (2,))


def test_h42_is_krawtchouk():
    sp = from_krein_array(H42)
    assert sp.vertex_count == 16
    assert sp.Q == hamming.krawtchouk_matrix(4, 2)
    assert sp.valencies == (1, 4, 6, 4, 1)
    check_invariants(sp)


@pytest.mark.parametrize("n, q", [(5, 2), (11, 3)])
def test_qant4_eigenmatrix(n, q):
    sp = from_krein_array(qant4_krein_array(n, q))
    assert sp.Q == qant4_Q(n, q)
    check_invariants(sp)
    assert feasibility_report(sp).passed


@pytest.mark.parametrize("r", [5, 7, 9, 11, 21])
def test_noda_family(r):
    sp = from_krein_array(noda_krein_array(r))
    assert sp.Q == noda_Q(r)
    assert sp.vertex_count == F(r * r * (r * r - 1), 2)
    assert sp.p(1, 1, 1) == F((r * r - 3 * r + 6) * (r * r - 1), 12)
    assert feasibility_report(sp).passed
    check_invariants(sp)
    zeros = krein_zero_set(sp)
    assert not zeros.mismatches


def test_r9_frozen_values():
    # independently recomputed with P = n Q^-1
    sp = from_krein_array(noda_krein_array(9))
    assert sp.multiplicities == (1, 77, 2772, 385, 5)
    assert sp.valencies == (1, 1050, 385, 1650, 154)
    assert sp.p(1, 1, 1) == 400
    assert len(krein_zero_set(sp)) == 75


@pytest.mark.parametrize("r", [4, 6, 8])
def test_even_r_infeasible(r):
    try:
        sp = from_krein_array(noda_krein_array(r))
    except (ArithmeticError, DegenerateArray):
        return
    assert not feasibility_report(sp).passed


def test_r6_violation():
    rep = feasibility_report(from_krein_array(noda_krein_array(6)))
    assert ("intersection_numbers", (1, 1, 2), F(525, 8)) in rep.violations


def test_q_antipodal_pattern():
    assert H42.is_q_antipodal() and GOLAY.is_q_antipodal()
    assert not KreinArray.parse("4,3,2;1,2,3").is_q_antipodal()
    sp = from_krein_array(GOLAY)
    zeros = krein_zero_set(sp)
    for i, j, k in itertools.product(range(5), repeat=3):
        if i + j + k > 8 and not triangle_ok(4 - i, 4 - j, 4 - k):
            assert (i, j, k) in zeros
        if not triangle_ok(i, j, k):
            assert (i, j, k) in zeros


def test_roundtrip_through_intersection_numbers():
    for ka in (H42, GOLAY, noda_krein_array(9)):
        sp = from_krein_array(ka)
        back = from_intersection_numbers(sp.intersection_numbers)
        assert back.same_parameters(sp)
        assert back.krein_array == ka


def test_from_eigenmatrix_without_array():
    sp = from_eigenmatrix(hamming.krawtchouk_matrix(3, 2))
    assert sp.vertex_count == 8
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert sp.read_krein_array() == KreinArray.parse("3,2,1;1,2,3")


def test_to_dict_is_strings():
    d = from_krein_array(H42).to_dict()
    assert d["vertex_count"] == "16"
    assert d["krein_array"] == "4,3,2,1;1,2,3,4"
