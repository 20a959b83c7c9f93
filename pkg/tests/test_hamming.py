import cmath
import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightdesigns.hamming import (
    NonIntegral,
    PointSet,
    design_strength,
    dual_distribution,
    fiber_subscheme_params,
    inner_distribution,
    krawtchouk,
    noda_congruences,
    rao_bound,
    strength_by_counting,
    strength_by_transform,
    wilson_zeros,
)


def character_sum(n, q, i, x):
    """K_i(x) as the sum of q-th roots of unity over weight-i words."""
    word = [1] * x + [0] * (n - x)
    total = 0
    for y in itertools.product(range(q), repeat=n):
        if sum(1 for s in y if s) == i:
            total += cmath.exp(2j * cmath.pi * sum(a * b for a, b in zip(word, y)) / q)
    return round(total.real)


@pytest.mark.parametrize("n, q", [(3, 2), (4, 2), (3, 3), (4, 3), (2, 4)])
def test_krawtchouk_against_character_sums(n, q):
    for i in range(n + 1):
        for x in range(n + 1):
            assert krawtchouk(n, q, i, x) == character_sum(n, q, i, x)


@pytest.mark.parametrize("n, q, i, x, value", [(5, 2, 1, 2, 1), (11, 3, 1, 0, 22), (4, 2, 2, 1, 0)])
def test_krawtchouk_values(n, q, i, x, value):
    assert krawtchouk(n, q, i, x) == value


@pytest.mark.parametrize("n, q, e, value", [(5, 2, 2, 16), (11, 3, 2, 243), (4, 2, 0, 1)])
def test_rao_bound(n, q, e, value):
    assert rao_bound(n, q, e) == value


@pytest.mark.parametrize("n, q, e", [(5, 2, 2), (4, 3, 1), (3, 4, 2)])
def test_rao_is_ball_size(n, q, e):
    ball = sum(1 for w in itertools.product(range(q), repeat=n) if sum(1 for s in w if s) <= e)
    assert rao_bound(n, q, e) == ball


def test_pointset_validation():
    with pytest.raises(ValueError, match="length"):
        PointSet.of(3, 2, [(0, 1)])
    with pytest.raises(ValueError, match="symbol"):
        PointSet.of(2, 2, [(0, 2)])
    with pytest.raises(ValueError, match="duplicate"):
        PointSet.of(2, 2, [(0, 1), (0, 1)])


def test_full_space_distributions(full_space):
    H = full_space(4, 3)
    inner = inner_distribution(H)
    assert inner.a == tuple(F(krawtchouk(4, 3, i, 0)) for i in range(5))
    assert dual_distribution(H) == (81, 0, 0, 0, 0)
    assert design_strength(H) == 4


def test_even_weight_code():
    C = PointSet.of(4, 2, [w for w in itertools.product(range(2), repeat=4) if sum(w) % 2 == 0])
    assert strength_by_transform(C) == 3
    assert strength_by_counting(C) == 3
    assert inner_distribution(C).degree_set == (2, 4)


@settings(max_examples=80, deadline=None)
@given(st.sets(st.tuples(*[st.integers(0, 2)] * 3), min_size=1))
def test_strength_paths_agree(words):
    C = PointSet.of(3, 3, sorted(words))
    assert strength_by_transform(C) == strength_by_counting(C, max_t=3)
    assert inner_distribution(C).size == len(C)


@pytest.mark.parametrize("n, q, zeros", [(5, 2, (2, 4)), (11, 3, (6, 9))])
def test_wilson_zeros(n, q, zeros):
    res = wilson_zeros(n, q, 2)
    assert res.zeros == zeros and res.has_e_zeros


def test_wilson_zeros_not_integral():
    assert not wilson_zeros(6, 2, 2).has_e_zeros


def test_noda_congruences():
    good = noda_congruences(21)
    assert good.passed and good.parameters == (7874496, 794, 6)
    bad = noda_congruences(3)
    assert not bad.passed
    assert "a = +-1 (mod 5)" in bad.failed()
    assert "a = 0 (mod 3)" not in bad.failed()


def test_noda_smallest_survivor():
    survivors = [a for a in range(1, 400) if noda_congruences(a).passed]
    # CRT of a = 0 mod 3, a = 5 mod 16, a = +-1 mod 5
    assert survivors[:2] == [21, 69]
    assert all(a % 240 in (21, 69) for a in survivors)


@pytest.mark.parametrize(
    "n, q, size, degrees, strength, inner, srg",
    [
        (10, 3, 81, (6, 9), 3, {6: 60, 9: 20}, {6: (81, 60, 45, 42), 9: (81, 20, 1, 6)}),
        (4, 2, 8, (2, 4), 3, {2: 6, 4: 1}, {2: (8, 6, 4, 6), 4: (8, 1, 0, 0)}),
    ],
)
def test_fiber_parameters(n, q, size, degrees, strength, inner, srg):
    fp = fiber_subscheme_params(n, q, size, degrees, strength)
    assert fp.inner == inner
    assert fp.srg == srg


def test_fiber_parameters_nonintegral():
    with pytest.raises(NonIntegral):
        fiber_subscheme_params(10, 3, 80, (6, 9), 3)
