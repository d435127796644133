"""Exact sparse linear algebra, cross-checked against a dense oracle."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from liegraphs.linalg import (PresolvedSolver, SparseMatrix, in_image,
                              kernel_basis, rank, solve)


def dense_rank(dense):
    """Independent oracle: plain Gaussian elimination on a dense copy."""
    m = [list(map(Fraction, row)) for row in dense]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c] / pv
                for j in range(c, n_cols):
                    m[i][j] -= f * m[r][j]
        r += 1
    return r


def random_dense(rng, n_rows, n_cols, density=0.4):
    return [[Fraction(rng.randint(-4, 4), rng.randint(1, 3))
             if rng.random() < density else Fraction(0)
             for _ in range(n_cols)] for _ in range(n_rows)]


def test_rank_empty():
    assert rank(SparseMatrix(0, 0, [])) == 0


def test_rank_identity():
    ident = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    assert rank(SparseMatrix.from_dense(ident)) == 3


def test_rank_matches_dense_oracle():
    rng = random.Random(11)
    for _ in range(60):
        dense = random_dense(rng, rng.randint(1, 7), rng.randint(1, 7))
        assert rank(SparseMatrix.from_dense(dense)) == dense_rank(dense)


def test_kernel_identity_empty():
    ident = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    assert kernel_basis(SparseMatrix.from_dense(ident)) == []


def test_kernel_zero_matrix():
    basis = kernel_basis(SparseMatrix(2, 3, [[], []]))
    assert len(basis) == 3


def test_rank_nullity_and_kernel_exact():
    rng = random.Random(23)
    for _ in range(40):
        dense = random_dense(rng, rng.randint(1, 6), rng.randint(1, 6))
        mat = SparseMatrix.from_dense(dense)
        basis = kernel_basis(mat)
        assert rank(mat) + len(basis) == mat.n_cols
        for vec in basis:
            assert mat.mul_vector(vec) == {}
            assert vec  # nonzero


def test_rank_permutation_invariant():
    rng = random.Random(37)
    for _ in range(30):
        dense = random_dense(rng, rng.randint(2, 6), rng.randint(2, 6))
        rows = list(range(len(dense)))
        cols = list(range(len(dense[0])))
        rng.shuffle(rows)
        rng.shuffle(cols)
        shuffled = [[dense[i][j] for j in cols] for i in rows]
        assert (rank(SparseMatrix.from_dense(dense))
                == rank(SparseMatrix.from_dense(shuffled)))


def test_in_image_trivial_cases():
    mat = SparseMatrix.from_dense([[Fraction(1), Fraction(0)],
                                   [Fraction(0), Fraction(0)]])
    assert in_image(mat, {})
    assert in_image(mat, {0: Fraction(3)})
    assert not in_image(mat, {1: Fraction(1)})
    zero = SparseMatrix(2, 2, [[], []])
    assert not in_image(zero, {0: Fraction(1)})
    with pytest.raises(ValueError):
        in_image(mat, {5: Fraction(1)})


def test_in_image_consistent_with_solve():
    rng = random.Random(51)
    for _ in range(30):
        dense = random_dense(rng, rng.randint(1, 5), rng.randint(1, 5))
        mat = SparseMatrix.from_dense(dense)
        x = {j: Fraction(rng.randint(-3, 3)) for j in range(mat.n_cols)}
        b = mat.mul_vector(x)
        assert in_image(mat, b)


def test_from_columns_matches_transpose():
    cols = [{0: Fraction(1), 2: Fraction(-2)}, {1: Fraction(1, 2)}]
    mat = SparseMatrix.from_columns(cols, n_rows=3)
    assert mat.to_dense() == [[Fraction(1), Fraction(0)],
                              [Fraction(0), Fraction(1, 2)],
                              [Fraction(-2), Fraction(0)]]
    assert mat.transpose().transpose() == mat


def test_dump_roundtrip():
    rng = random.Random(7)
    dense = random_dense(rng, 5, 4)
    mat = SparseMatrix.from_dense(dense)
    assert SparseMatrix.loads(mat.dumps()) == mat


@given(st.integers(1, 5), st.integers(1, 5), st.integers())
@settings(max_examples=50, deadline=None)
def test_rank_bound_property(n_rows, n_cols, seed):
    rng = random.Random(seed)
    dense = random_dense(rng, n_rows, n_cols)
    r = rank(SparseMatrix.from_dense(dense))
    assert 0 <= r <= min(n_rows, n_cols)
    assert r == dense_rank(dense)


def test_presolved_matches_solve():
    rng = random.Random(11)
    for _ in range(25):
        mat = SparseMatrix.from_dense(random_dense(rng, 6, 5))
        ps = PresolvedSolver(mat)
        for _ in range(4):
            x = {j: Fraction(rng.randint(-3, 3)) for j in range(mat.n_cols)}
            b = mat.mul_vector(x)
            got = ps.solve(b)
            assert got is not None
            assert mat.mul_vector(got) == b
            assert (solve(mat, b) is None) == (got is None)
        # a vector outside the image must be rejected
        bad = {i: Fraction(rng.randint(-3, 3)) for i in range(mat.n_rows)}
        assert (ps.solve(bad) is None) == (solve(mat, bad) is None)
