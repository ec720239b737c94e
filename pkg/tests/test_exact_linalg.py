from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from ppdivisor.errors import NotInjective, TorsionCokernel, ZeroVector
from ppdivisor.exact_linalg import (Matrix, cokernel_presentation, hermite_basis, normalized_section,
                                    nullspace, primitive_vector, smith_normal_form, solve_integer)
from strategies import int_matrices


def test_matrix_basics():
    A = Matrix([[1, 2], [3, 4]])
    assert A.shape == (2, 2)
    assert A.T == Matrix([[1, 3], [2, 4]])
    assert A.det() == -2
    assert A @ A.inverse() == Matrix.identity(2)
    assert A.inverse()[0, 0] == -2
    assert A @ (1, 1) == (3, 7)
    assert Matrix([[Fraction(1, 2)]]).is_integral is False


def test_ragged_matrix_rejected():
    with pytest.raises(ValueError):
        Matrix([[1, 2], [3]])


def test_primitive_vector():
    assert primitive_vector((-4, 6)) == (-2, 3)
    assert primitive_vector((Fraction(1, 2), Fraction(1, 3))) == (3, 2)
    with pytest.raises(ZeroVector):
        primitive_vector((0, 0))


def test_nullspace_of_a_row():
    (v,) = nullspace([(1, 1)], 2)
    assert v[0] + v[1] == 0


def test_snf_known_example():
    snf = smith_normal_form(Matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
    assert snf.diagonal == (2, 6, 12)


def _check_certificate(A: Matrix):
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.D
    assert abs(snf.U.det()) == 1 and snf.U.is_integral
    assert abs(snf.V.det()) == 1 and snf.V.is_integral
    r, c = A.shape
    for i in range(r):
        for j in range(c):
            if i != j:
                assert snf.D[i, j] == 0
    diag = snf.diagonal
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)
    return snf


@settings(max_examples=25)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: int_matrices(r, c))))
def test_snf_certificate_matches_determinantal_divisors(A):
    snf = _check_certificate(A)
    assert snf.diagonal == oracles.smith_invariants(A.rows)


@given(int_matrices(3, 2, -4, 4), st.tuples(*[st.integers(-3, 3)] * 2))
def test_solve_integer_finds_solutions(A, x):
    b = A @ x
    sol = solve_integer(A, b)
    assert sol is not None and A @ sol == b


@given(int_matrices(2, 2, -3, 3), st.tuples(*[st.integers(-5, 5)] * 2))
def test_solve_integer_agrees_with_search(A, b):
    found = any(A @ x == b for x in product(range(-12, 13), repeat=2))
    sol = solve_integer(A, b)
    if sol is not None:
        assert A @ sol == b
    elif abs(A.det()) == 1 or found:
        pytest.fail(f"missed a solution of {A} x = {b}")


def test_solve_integer_rejects_fractional_rhs():
    assert solve_integer(Matrix([[1]]), [Fraction(1, 2)]) is None
    assert solve_integer(Matrix([[2]]), [1]) is None


@given(st.lists(st.tuples(*[st.integers(-6, 6)] * 3), min_size=1, max_size=4))
def test_hermite_basis_spans_the_same_lattice(vectors):
    assume(any(any(v) for v in vectors))
    basis = hermite_basis(vectors, 3)
    r = len(basis)
    assert r == Matrix(vectors, 3).rank()
    for v in vectors:
        assert oracles.integer_combination(v, basis)
    assert oracles.minor_gcd(basis, r) == oracles.minor_gcd(vectors, r)
    pivots = [next(j for j, x in enumerate(row) if x) for row in basis]
    assert pivots == sorted(set(pivots))
    for i, (row, p) in enumerate(zip(basis, pivots)):
        assert row[p] > 0
        for above in basis[:i]:
            assert 0 <= above[p] < row[p]


def test_single_weight_sections():
    seq = cokernel_presentation(Matrix.column([6, -6, 3, 2]))
    assert seq.s == Matrix([[0, 0, 1, -1]])
    seq = cokernel_presentation(Matrix.column([2, 2, -2, 1]))
    assert seq.s == Matrix([[0, 0, 0, 1]])


def test_section_falls_back_without_unit_block():
    F = Matrix.column([6, -6, 3, 2])
    fallback = Matrix([[0, 0, 1, -1]])
    assert normalized_section(F, fallback) == fallback


@settings(max_examples=100)
@given(st.integers(1, 2).flatmap(lambda k: int_matrices(4, k, -4, 4)))
def test_cokernel_presentation_is_exact(F):
    assume(F.rank() == F.ncols)
    assume(all(d == 1 for d in oracles.smith_invariants(F.rows)))
    seq = cokernel_presentation(F)
    m, k = F.shape
    assert seq.P @ F == Matrix.zeros(m - k, k)
    assert seq.s @ F == Matrix.identity(k)
    assert seq.P.is_integral
    # P is onto Z^(m-k): its maximal minors have gcd one
    assert oracles.minor_gcd(seq.P.rows, m - k) == 1


def test_cokernel_presentation_errors():
    with pytest.raises(NotInjective):
        cokernel_presentation(Matrix([[1, 2], [2, 4], [3, 6]]))
    with pytest.raises(TorsionCokernel):
        cokernel_presentation(Matrix.column([2, 4, 6]))
    with pytest.raises(ValueError):
        cokernel_presentation(Matrix.column([1, 1, 1]), section=Matrix([[1, 1, 0]]))
