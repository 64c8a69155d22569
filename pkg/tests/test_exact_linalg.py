from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from qtrick.errors import Degenerate, NotAlternating, RankDeficient, Singular
from qtrick.exact_linalg import (
    IntMatrix,
    RatMatrix,
    block_diag,
    det,
    hnf,
    inv,
    is_unimodular,
    lattice_equal,
    snf,
    standard_symplectic,
    symplectic_basis,
    symplectic_type,
)
from strategies import alternating_forms, int_matrices, square_matrices, unimodulars


def test_det_examples(J):
    assert det(IntMatrix.identity(4)) == 1
    assert det(IntMatrix([[0, 2], [-2, 0]])) == 4
    assert det(block_diag(J, J)) == 1


def test_det_rational():
    assert det(RatMatrix([[Fraction(1, 2), 0], [0, 3]])) == Fraction(3, 2)


@given(square_matrices())
def test_det_matches_sympy(A):
    assert det(A) == sympy.Matrix(A.tolist()).det()


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(int_matrices(n), int_matrices(n))))
def test_det_multiplicative(pair):
    A, B = pair
    assert det(A @ B) == det(A) * det(B)


def test_inv_examples(J):
    assert inv(IntMatrix.identity(3)) == IntMatrix.identity(3)
    assert inv(J) == IntMatrix([[0, -1], [1, 0]])
    assert inv(IntMatrix([[2, 0], [0, 2]])) == RatMatrix([["1/2", 0], [0, "1/2"]])


def test_inv_singular():
    with pytest.raises(Singular):
        inv(IntMatrix([[1, 2], [2, 4]]))


@given(square_matrices(lo=-20, hi=20))
def test_inv_is_inverse(A):
    assume(det(A) != 0)
    n = A.nrows
    assert A @ inv(A) == IntMatrix.identity(n)
    assert inv(A) @ A == IntMatrix.identity(n)


def test_hnf_examples():
    H, U = hnf(IntMatrix.identity(3))
    assert H == IntMatrix.identity(3)
    H, U = hnf(IntMatrix([[2, 1], [0, 1]]))
    assert abs(det(H)) == 2
    assert H == IntMatrix([[1, 0], [1, 2]])


def _is_hermite(H):
    row = 0
    for k in range(H.ncols):
        while row < H.nrows and H[row, k] == 0:
            row += 1
        p = H[row, k]
        if p <= 0 or any(H[i, k] for i in range(row)):
            return False
        if any(not 0 <= H[row, j] < p for j in range(k)):
            return False
        row += 1
    return True


@given(st.integers(1, 4).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, 6))).flatmap(
    lambda mn: int_matrices(*mn)))
def test_hnf_contract(A):
    H, U = hnf(A)
    assert is_unimodular(U)
    AU = A @ U
    assert AU.submatrix(0, A.nrows, 0, H.ncols) == H
    assert AU.submatrix(0, A.nrows, H.ncols, A.ncols).is_zero()
    assert H.ncols == sympy.Matrix(A.tolist()).rank()
    assert _is_hermite(H)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(square_matrices(max_n=n).filter(lambda a: a.nrows == n),
                                                       unimodulars(n))))
def test_hnf_canonical_under_unimodular(pair):
    A, U = pair
    assert hnf(A)[0] == hnf(A @ U)[0]


def test_snf_examples():
    assert snf(IntMatrix.diag([1, 1])).diagonal == (1, 1)
    assert snf(IntMatrix([[0, 2], [-2, 0]])).diagonal == (2, 2)
    assert snf(IntMatrix.diag([6, 4])).diagonal == (2, 12)


@given(st.integers(1, 4).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, 4))).flatmap(
    lambda mn: int_matrices(*mn, lo=-30, hi=30)))
def test_snf_contract(A):
    res = snf(A)
    assert res.U @ A @ res.V == res.S
    assert is_unimodular(res.U) and is_unimodular(res.V)
    d = res.diagonal
    assert all(x >= 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]) if a)
    assert all(res.S[i, j] == 0 for i in range(A.nrows) for j in range(A.ncols) if i != j)
    # independent oracle
    ref = smith_normal_form(sympy.Matrix(A.tolist()))
    assert sorted(abs(ref[i, i]) for i in range(min(A.shape))) == sorted(d)
    if A.is_square and det(A):
        assert abs(det(A)) == sympy.prod(d)


def test_symplectic_type_examples(J):
    assert symplectic_type(J) == (1,)
    assert symplectic_type(J.scale(2)) == (2,)
    assert symplectic_type(block_diag(J, J.scale(3))) == (1, 3)
    assert symplectic_type(block_diag(J.scale(6), J.scale(4))) == (2, 12)


def test_symplectic_type_errors(J):
    with pytest.raises(NotAlternating):
        symplectic_type(IntMatrix([[0, 1], [1, 0]]))
    with pytest.raises(Degenerate):
        symplectic_type(block_diag(J, IntMatrix.zeros(2)))


@given(alternating_forms())
def test_symplectic_basis_contract(E):
    U, d = symplectic_basis(E)
    assert is_unimodular(U)
    assert U.T @ E @ U == standard_symplectic(d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    prod = 1
    for x in d:
        prod *= x
    assert prod**2 == abs(det(E))
    # SNF of an alternating form has each elementary divisor twice
    assert snf(E).diagonal == tuple(x for x in d for _ in range(2))


@given(alternating_forms().flatmap(lambda E: st.tuples(st.just(E), unimodulars(E.nrows))))
def test_symplectic_type_congruence_invariant(pair):
    E, U = pair
    assert symplectic_type(U.T @ E @ U) == symplectic_type(E)


def test_lattice_equal_examples():
    I2 = IntMatrix.identity(2)
    assert lattice_equal(I2, I2)
    assert lattice_equal(I2, IntMatrix([[2, 1], [1, 1]]))
    assert not lattice_equal(I2, RatMatrix([["1/2", 0], [0, 1]]))
    with pytest.raises(RankDeficient):
        lattice_equal(I2, IntMatrix([[1, 2], [1, 2]]))


def test_lattice_equal_with_redundant_generators():
    a = RatMatrix([["1/2", 0, 1], [0, 1, 1]])
    b = RatMatrix([["1/2", "1/2"], [0, 1]])
    assert lattice_equal(a, b)


def test_matrices_are_immutable(J):
    with pytest.raises(AttributeError):
        J.rows = ()
