from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightdesigns.exactmath import (
    ExactMatrix,
    Inconsistent,
    IrrationalSpectrum,
    Singular,
    as_fraction,
    characteristic_polynomial,
    invert,
    rational_eigenvalues,
    solve_affine,
)

small = st.integers(min_value=-6, max_value=6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("3/4") == F(3, 4)


def test_matrix_basics():
    A = ExactMatrix([[1, 2], [3, 4]])
    assert A.shape == (2, 2)
    assert A[1, 0] == 3
    assert A.T == ExactMatrix([[1, 3], [2, 4]])
    assert A @ ExactMatrix.identity(2) == A
    assert A @ [1, 1] == (3, 7)
    assert (A - A) == ExactMatrix.zeros(2, 2)
    assert 2 * A == A + A
    with pytest.raises(ValueError):
        ExactMatrix([[1, 2], [3]])


def test_solve_unique():
    sol = solve_affine(ExactMatrix([[2, 1], [1, 3]]), [3, 5])
    assert sol.dimension == 0
    assert sol.particular == (F(4, 5), F(7, 5))


def test_solve_underdetermined_basis_shape():
    A = ExactMatrix([[1, 1, 1]])
    sol = solve_affine(A, [6])
    assert sol.dimension == 2
    assert sol.free_indices == (1, 2)
    assert sol.point((1, 2)) == (3, 1, 2)
    assert sol.coordinates((1, 2, 3)) == (2, 3)
    assert sol.coordinates((1, 1, 1)) is None


def test_inconsistent_reports_row():
    A = ExactMatrix([[1, 1], [2, 2], [0, 1]])
    with pytest.raises(Inconsistent) as exc:
        solve_affine(A, [1, 3, 0])
    assert exc.value.row == 1


def test_singular():
    with pytest.raises(Singular):
        invert(ExactMatrix([[1, 2], [2, 4]]))


@pytest.mark.parametrize(
    "rows, poly",
    [
        ([[2]], (1, -2)),
        ([[1, 2], [3, 4]], (1, -5, -2)),
        ([[0, 1, 0], [0, 0, 1], [6, -11, 6]], (1, -6, 11, -6)),
    ],
)
def test_characteristic_polynomial(rows, poly):
    assert characteristic_polynomial(ExactMatrix(rows)) == poly


def test_eigenvalues_with_multiplicity():
    A = ExactMatrix([[F(1, 2), 0, 0], [0, 3, 1], [0, 0, 3]])
    assert rational_eigenvalues(A) == [(3, 2), (F(1, 2), 1)]


def test_irrational_spectrum():
    with pytest.raises(IrrationalSpectrum) as exc:
        rational_eigenvalues(ExactMatrix([[0, 2], [1, 0]]))
    assert exc.value.residual_degree == 2


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_inverse_roundtrip(rows):
    A = ExactMatrix(rows)
    try:
        B = invert(A)
    except Singular:
        return
    assert A @ B == ExactMatrix.identity(4)
    assert B @ A == ExactMatrix.identity(4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=5), st.data())
def test_solve_affine_substitution(rows, data):
    A = ExactMatrix(rows)
    x0 = data.draw(st.lists(small, min_size=5, max_size=5))
    b = A @ x0
    sol = solve_affine(A, b)
    params = data.draw(st.lists(small, min_size=sol.dimension, max_size=sol.dimension))
    assert A @ sol.point(params) == b
    assert sol.coordinates(x0) is not None


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=1, max_size=5), st.data())
def test_eigen_multiplicities_sum_to_dimension(diag, data):
    n = len(diag)
    # upper triangular matrix: eigenvalues are the diagonal
    upper = [[diag[i] if i == j else (data.draw(small) if j > i else 0) for j in range(n)] for i in range(n)]
    eig = rational_eigenvalues(ExactMatrix(upper))
    assert sum(m for _, m in eig) == n
    assert sorted(v for v, m in eig for _ in range(m)) == sorted(diag)
