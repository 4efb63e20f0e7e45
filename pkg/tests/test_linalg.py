import itertools

import numpy as np
import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from matwaring.exceptions import DimensionMismatch, IllConditioned, IndexOutOfRange, Singular
from matwaring.jordan import jordan_matrix
from matwaring.linalg import (
    SpanTracker,
    asmat,
    char_poly,
    constrained_basis_completion,
    det,
    eye,
    inverse,
    matmul,
    max_abs,
    nullity,
    nullspace,
    rank,
    select_independent,
    shift_submatrix,
    solve_linear,
    to_approx_matrix,
    zeros,
)

from conftest import G, exact_matrices, mat


def to_sympy(M):
    return sympy.Matrix(
        [[sympy.Rational(int(x.re.numerator), int(x.re.denominator))
          + sympy.I * sympy.Rational(int(x.im.numerator), int(x.im.denominator)) for x in row] for row in M]
    )


def from_sympy(x):
    re, im = sympy.re(x), sympy.im(x)
    return G(G.parse(str(re)).re, G.parse(str(im)).re)


@pytest.mark.parametrize(
    "M, want",
    [(eye(3), 3), (zeros(4), 0), (jordan_matrix([(G(0), 3)]), 2)],
)
def test_rank_examples(M, want):
    assert rank(M) == want
    assert rank(to_approx_matrix(M)) == want


@given(exact_matrices(max_n=5))
def test_rank_matches_sympy(M):
    assert rank(M) == to_sympy(M).rank()
    assert rank(M) + nullity(M) == M.shape[0]


def test_rank_flags_fragile_pivot():
    M = to_approx_matrix(eye(2))
    M[1, 1] = M[1, 1] * 0 + M[1, 1].real * (2 ** -64) * 2
    with pytest.raises(IllConditioned):
        rank(M)


def test_char_poly_examples():
    assert char_poly(mat([[1, 0], [0, 2]])) == [G(2), G(-3), G(1)]
    assert char_poly(jordan_matrix([(G(0), 4)])) == [G(0)] * 4 + [G(1)]


def _principal_minor_coeffs(M):
    n = M.shape[0]
    out = []
    for i in range(n + 1):
        size = n - i
        total = G(0)
        for idx in itertools.combinations(range(n), size):
            total = total + (det(M[np.ix_(idx, idx)]) if size else G(1))
        out.append(total * (-1) ** size)
    return out


@given(exact_matrices(max_n=5))
def test_char_poly_matches_principal_minors(M):
    assert char_poly(M) == _principal_minor_coeffs(M)


@given(exact_matrices(max_n=4))
def test_char_poly_approx_agrees(M):
    exact = char_poly(M)
    approx = char_poly(to_approx_matrix(M))
    scale = 1 + max(abs(complex(c)) for c in exact)
    for a, b in zip(exact, approx):
        assert abs(complex(a) - complex(b)) <= 1e-60 * scale ** 2


def test_char_poly_of_shifted_shape():
    # T with first row e_1, m zero rows and T_I invertible:
    # chi_T(z) = z^m (z - 1) chi_{T_I}(z)
    T = mat([[1, 0, 0, 0], [0, 0, 0, 0], [5, 7, 2, 1], [1, 2, 3, 5]])
    TI = shift_submatrix(T, [2, 3])
    assert rank(TI) == 2
    z = sympy.Symbol("z")
    lhs = to_sympy(T).charpoly(z).as_expr()
    rhs = sympy.expand(z * (z - 1) * to_sympy(TI).charpoly(z).as_expr())
    assert sympy.expand(lhs - rhs) == 0


def test_inverse_examples():
    assert (inverse(eye(3)) == eye(3)).all()
    assert (inverse(mat([[2, 0], [0, 4]])) == mat([["1/2", 0], [0, "1/4"]])).all()
    with pytest.raises(Singular):
        inverse(mat([[1, 2], [2, 4]]))


@given(exact_matrices(min_n=2, max_n=5))
def test_inverse_roundtrip(M):
    assume(rank(M) == M.shape[0])
    assert (matmul(M, inverse(M)) == eye(M.shape[0])).all()
    A = to_approx_matrix(M)
    assert max_abs(matmul(A, inverse(A)) - to_approx_matrix(eye(M.shape[0]))) < 2 ** -128 * 1e6


@given(exact_matrices(max_n=4))
def test_det_matches_sympy(M):
    assert det(M) == from_sympy(sympy.nsimplify(to_sympy(M).det()))


@given(exact_matrices(max_n=4))
def test_nullspace_is_kernel(M):
    basis = nullspace(M)
    assert len(basis) == nullity(M)
    for v in basis:
        assert all(x == 0 for x in M.dot(v))


def test_solve_linear():
    A = mat([[2, 1], [1, 3]])
    b = mat([[1, 0], [0, 1]])
    assert (matmul(A, solve_linear(A, b)) == b).all()


def test_shift_submatrix():
    # rows t_0..t_3, columns 1..4: entry label "ij" is t_{i,j}
    T = np.array([[G(10 * i + j) for j in range(1, 5)] for i in range(4)], dtype=object)
    assert shift_submatrix(T, [1])[0, 0] == G(12)
    got = shift_submatrix(T, [1, 3])
    assert [[str(x) for x in r] for r in got] == [["12", "14"], ["32", "34"]]
    with pytest.raises(IndexOutOfRange):
        shift_submatrix(T, [0])
    with pytest.raises(IndexOutOfRange):
        shift_submatrix(T, [])


def _check_completion(rows, coords, n, ts):
    full = np.array(list(rows) + list(ts), dtype=object)
    assert rank(full) == n
    if not ts:
        return
    proj = np.array([t[coords] for t in ts], dtype=object)
    assert rank(proj) == len(coords)


def test_completion_examples():
    e1 = np.array([G(1), G(0)], dtype=object)
    ts = constrained_basis_completion([e1], [1], 2)
    assert [str(x) for x in ts[0]] == ["0", "1"]
    ts = constrained_basis_completion([np.array([G(1), G(1), G(0)], dtype=object)], [1, 2], 3)
    _check_completion([np.array([G(1), G(1), G(0)], dtype=object)], [1, 2], 3, ts)
    ts = constrained_basis_completion([], [0, 1, 2], 3)
    _check_completion([], [0, 1, 2], 3, ts)


def test_completion_rejects_wrong_coordinate_count():
    with pytest.raises(DimensionMismatch):
        constrained_basis_completion([], [1, 2], 3)


@given(st.data())
def test_completion_property(data):
    n = data.draw(st.integers(1, 8))
    m = data.draw(st.integers(0, n))
    rows, span = [], SpanTracker(n)
    while len(rows) < m:
        v = np.array([G(data.draw(st.integers(-2, 2))) for _ in range(n)], dtype=object)
        if span.add(v):
            rows.append(v)
    coords = sorted(data.draw(st.permutations(range(n)))[: n - m])
    ts = constrained_basis_completion(rows, coords, n)
    _check_completion(rows, coords, n, ts)


def test_select_independent_order():
    vs = [np.array([G(1), G(0)], dtype=object), np.array([G(2), G(0)], dtype=object), np.array([G(0), G(1)], dtype=object)]
    assert select_independent(vs) == [0, 2]
    assert select_independent(vs, order=[1, 0, 2]) == [1, 2]


def test_asmat_rejects_ragged_and_nonsquare():
    with pytest.raises(DimensionMismatch):
        asmat([[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        asmat([[1, 2, 3], [4, 5, 6]])
