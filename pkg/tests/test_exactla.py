import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from symmid.exactla import (
    DEFAULT_PRIME,
    RatMatrix,
    Subspace,
    difference_components,
    integer_row,
    kernel,
    modular_rank,
    rank,
    rank_rows,
    rref,
)


def low_rank_matrix(rng, m, n, r, lo=-4, hi=4):
    A = [[rng.randint(lo, hi) for _ in range(r)] for _ in range(m)]
    B = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(r)]
    return [[sum(A[i][k] * B[k][j] for k in range(r)) for j in range(n)] for i in range(m)]


matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4),
                                    min_size=n, max_size=n), min_size=m, max_size=m)))


def test_rank_examples():
    assert rank(RatMatrix.identity(3)) == 3
    assert rank(RatMatrix.zeros(3, 4)) == 0
    assert rank([[1, 2, 3], [2, 4, 6]]) == 1


def test_kernel_examples():
    K = kernel([[1, 1]])
    assert K.dim() == 1 and K.contains_vector([1, -1])
    assert kernel(RatMatrix.identity(4)).dim() == 0


@given(matrices)
def test_rank_and_rref_vs_sympy(rows):
    M = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in r] for r in rows])
    assert rank(rows) == M.rank()
    ours = rref(rows)
    theirs, _ = M.rref()
    nz = [list(theirs.row(i)) for i in range(theirs.rows) if any(theirs.row(i))]
    assert [[sp.Rational(v.numerator, v.denominator) for v in r] for r in ours.rows] == nz


@given(matrices)
def test_kernel_vectors_vanish_and_count(rows):
    K = kernel(rows)
    M = RatMatrix(rows)
    for v in K.basis:
        assert not any(M @ v)
    assert K.dim() == M.ncols - rank(rows)


def test_kernel_is_rref():
    rng = random.Random(5)
    for _ in range(20):
        rows = low_rank_matrix(rng, 5, 8, 3)
        K = kernel(rows)
        assert [list(r) for r in K.basis] == rref(list(K.basis)).rows


def test_modular_rank_lower_bound():
    rng = random.Random(11)
    for _ in range(100):
        m, n = rng.randint(1, 7), rng.randint(1, 7)
        rows = low_rank_matrix(rng, m, n, rng.randint(1, min(m, n)), -50, 50)
        assert modular_rank(rows, 10007) <= rank(rows)
        assert modular_rank(rows, 7) <= rank(rows)


def test_modular_rank_degeneracy():
    p = 10007
    assert modular_rank(RatMatrix.identity(3), p) == 3
    assert modular_rank([[p, 0], [0, 1]], p) == 1
    assert rank([[p, 0], [0, 1]]) == 2
    with pytest.raises(ValueError):
        modular_rank([[Fraction(1, p)]], p)


@pytest.mark.parametrize("mode", ["exact", "fast"])
def test_rank_rows_large_matches_exact(mode):
    rng = random.Random(3)
    rows = low_rank_matrix(rng, 40, 30, 17, -9, 9)
    irows = [integer_row(r) for r in rows]
    assert rank_rows(irows, 30, mode=mode) == 17
    # a multiple of the default prime hides a pivot mod p but not over Q
    tricky = [[DEFAULT_PRIME if i == j else 0 for j in range(25)] for i in range(25)]
    tricky[0][1] = 1
    assert rank_rows([integer_row(r) for r in tricky], 25, mode=mode) == 25


def test_subspace_operations():
    labels = list("abcd")
    U = Subspace.from_rows([[1, 1, 0, 0], [2, 2, 0, 0], [0, 0, 1, 1]], labels)
    assert U.dim() == 2
    V = Subspace.from_rows([[0, 0, 2, 2]], labels)
    assert U.contains(V) and not V.contains(U)
    W = U.orthogonal_complement()
    assert W.dim() == 2
    assert W.orthogonal_complement() == U
    assert U.join(W) == Subspace.full(labels)
    assert Subspace.from_json(U.to_json()) == U
    assert Subspace.zero(labels).orthogonal_complement() == Subspace.full(labels)


@given(matrices)
def test_double_complement(rows):
    U = Subspace.from_rows(rows, range(len(rows[0])))
    assert U.orthogonal_complement().orthogonal_complement() == U


def test_difference_components():
    rank_, find = difference_components([(1, 2), (2, 3), (1, 3), (4, 5)])
    assert rank_ == 3
    assert find(1) == find(3) and find(4) == find(5) and find(1) != find(4)
    M = sp.Matrix([[1, -1, 0, 0, 0], [0, 1, -1, 0, 0], [1, 0, -1, 0, 0], [0, 0, 0, 1, -1]])
    assert M.rank() == rank_


def test_matmul_and_transpose():
    A = RatMatrix([[1, 2], [3, 4]])
    assert (A @ RatMatrix.identity(2)) == A
    assert A.T.rows == [[1, 3], [2, 4]]
    assert A @ [1, 1] == [3, 7]
