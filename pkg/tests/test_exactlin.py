from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from npb.errors import NotContained, ShapeMismatch
from npb.exactlin import (FieldSpec, Matrix, QQ, Subspace, complement_basis, image, kernel,
                          quotient_dim, rank, rref, solve, solve_each)

F2 = FieldSpec.parse("F2")
F3 = FieldSpec.parse("F3")


def test_rank_examples():
    assert rank(Matrix.identity(QQ, 2)) == 2
    assert rank(Matrix.zeros(QQ, 3, 4)) == 0
    assert rank(Matrix.from_dense(QQ, [[1, 2], [2, 4]], 2)) == 1


def test_kernel_examples():
    assert kernel(Matrix.identity(QQ, 3)).dim == 0
    assert kernel(Matrix.zeros(QQ, 3, 3)).dim == 3
    K = kernel(Matrix.from_dense(F2, [[1, 1]], 2))
    assert K.dim == 1 and [list(v) for v in K.basis] == [[1, 1]]


def test_quotient_dim_examples():
    S = Subspace(QQ, 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert quotient_dim(S, S) == 0
    assert quotient_dim(Subspace(QQ, 3, []), S) == 3
    full = Subspace(QQ, 2, [[1, 0], [0, 1]])
    assert quotient_dim(Subspace(QQ, 2, [[1, 0]]), full) == 1


def test_quotient_dim_not_contained():
    with pytest.raises(NotContained):
        quotient_dim(Subspace(QQ, 2, [[1, 1]]), Subspace(QQ, 2, [[1, 0]]))


def test_field_parsing_and_norm():
    assert FieldSpec.parse("Q") == QQ
    assert FieldSpec.parse("F5").p == 5
    assert F3.norm(-1) == 2
    assert F3.norm(Fraction(1, 2)) == 2
    assert QQ.norm("3/6") == Fraction(1, 2)
    assert QQ.norm(Fraction(4, 2)) == 2
    with pytest.raises(ValueError):
        FieldSpec.parse("F4")


def test_shape_errors():
    with pytest.raises(ShapeMismatch):
        Matrix.identity(QQ, 2) @ Matrix.identity(QQ, 3)
    with pytest.raises(ShapeMismatch):
        solve(Matrix.identity(QQ, 2), Matrix.identity(QQ, 3))


def test_solve_inconsistent_and_free_variables():
    A = Matrix.from_dense(QQ, [[1, 1], [2, 2]], 2)
    assert solve(A, Matrix.from_dense(QQ, [[1], [3]], 1)) is None
    X = solve(A, Matrix.from_dense(QQ, [[1], [2]], 1))
    assert X.to_dense() == [[1], [0]]
    cols = solve_each(A, Matrix.from_dense(QQ, [[1, 1], [2, 3]], 2))
    assert cols[0] == [1, 0] and cols[1] is None


def test_rational_entries_survive():
    A = Matrix.from_dense(QQ, [[2, 1], [1, 1]], 2)
    X = solve(A, Matrix.from_dense(QQ, [[1], [0]], 1))
    assert X.to_dense() == [[1], [-1]]
    B = Matrix.from_dense(QQ, [[3, 0], [0, 1]], 2)
    Y = solve(B, Matrix.from_dense(QQ, [[1], [1]], 1))
    assert Y.to_dense() == [[Fraction(1, 3)], [1]]


def test_complement_basis():
    within = Subspace(QQ, 3, [[1, 0, 0], [0, 1, 0]])
    sub = Subspace(QQ, 3, [[1, 1, 0]])
    comp = complement_basis(sub, within)
    assert len(comp) == 1
    assert rank(Matrix.from_columns(QQ, 3, [[1, 1, 0]] + [list(c) for c in comp])) == 2


def test_block_assembly():
    I = Matrix.identity(QQ, 2)
    M = Matrix.block(QQ, [2, 1], [2, 2], {(0, 0): I, (1, 1): Matrix.from_dense(QQ, [[1, 1]], 2)})
    assert M.shape == (3, 4)
    assert M.to_dense() == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]


def _matrices(max_n=6):
    fields = st.sampled_from([QQ, F2, F3])
    return fields.flatmap(lambda F: st.tuples(
        st.just(F), st.integers(1, max_n), st.integers(1, max_n)).flatmap(
        lambda t: st.tuples(st.just(t[0]), st.lists(
            st.lists(st.integers(-2, 2), min_size=t[2], max_size=t[2]),
            min_size=t[1], max_size=t[1]), st.just(t[2]))))


@given(_matrices())
def test_engines_agree(data):
    F, rows, n = data
    M = Matrix.from_dense(F, rows, n)
    R1, p1 = rref(M, "flint")
    R2, p2 = rref(M, "python")
    assert p1 == p2 and R1 == R2
    assert rank(M, "flint") == rank(M, "python") == len(p1)


@given(_matrices())
def test_rank_nullity(data):
    F, rows, n = data
    M = Matrix.from_dense(F, rows, n)
    K = kernel(M)
    assert rank(M) + K.dim == n
    for v in K.basis:
        assert all(x == 0 for x in M.apply(v))
    assert image(M).dim == rank(M)


@given(_matrices(), st.integers(0, 2))
def test_solve_roundtrip(data, k):
    F, rows, n = data
    A = Matrix.from_dense(F, rows, n)
    X0 = Matrix.from_dense(F, [[(i * 7 + j * 3) % 5 - 2 for j in range(k + 1)] for i in range(n)], k + 1)
    B = A @ X0
    X = solve(A, B)
    assert X is not None and A @ X == B


def test_sparse_engine_selected_for_large_sparse():
    n = 400
    rows = [{i: 1, (i + 1) % n: 1} for i in range(n)]
    M = Matrix(F2, n, n, rows)
    assert rank(M) == rank(M, "flint") == rank(M, "python") == n - 1
    R1, p1 = rref(M)
    R2, p2 = rref(M, "flint")
    assert p1 == p2 and R1 == R2
