import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matwaring.exceptions import BadOrdering
from matwaring.jordan import (
    JordanStructure,
    jordan_form,
    jordan_matrix,
    nilpotent_tail_permutation,
    zero_split,
    zero_stats,
)
from matwaring.linalg import inverse, matmul, max_abs, rank, to_approx_matrix
from matwaring.selftest import conjugate, random_invertible

from conftest import G, mat

Z = G(0)


def test_diagonal_repeated_eigenvalue():
    d = jordan_form(mat([[2, 0], [0, 2]]))
    assert d.structure.blocks == ((G(2), 1), (G(2), 1))


def test_single_nilpotent_block():
    d = jordan_form(mat([[0, 1], [0, 0]]))
    assert d.structure.blocks == ((Z, 2),)


def test_recovers_conjugated_structure():
    rng = random.Random(5)
    B = conjugate(rng, jordan_matrix([(G(3), 2), (Z, 1)]))
    d = jordan_form(B)
    assert d.structure.blocks == ((G(3), 2), (Z, 1))
    assert (matmul(matmul(d.P, d.J), inverse(d.P)) == B).all()


def test_canonical_order():
    B = jordan_matrix([(Z, 1), (G(1), 1), (Z, 2), (G(-2), 1), (G(0, 2), 2)])
    d = jordan_form(B)
    assert d.structure.blocks == ((G(0, 2), 2), (G(-2), 1), (G(1), 1), (Z, 2), (Z, 1))


def test_irrational_eigenvalues_are_approximate():
    B = mat([[0, 2], [1, 0]])  # eigenvalues +-sqrt(2)
    d = jordan_form(B)
    resid = max_abs(matmul(matmul(d.P, d.J), inverse(d.P)) - to_approx_matrix(B))
    assert resid <= 2 ** -128
    assert sorted(complex(lam).real for lam, _ in d.structure.blocks) == pytest.approx([-2 ** 0.5, 2 ** 0.5])


@given(st.integers(0, 10 ** 6))
def test_planted_roundtrip(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    blocks, left = [], n
    while left:
        m = rng.randint(1, left)
        blocks.append((G(rng.randint(-3, 3)), m))
        left -= m
    B = conjugate(rng, jordan_matrix(blocks))
    d = jordan_form(B)
    assert sorted(d.structure.blocks, key=lambda b: (complex(b[0]).real, b[1])) == sorted(
        blocks, key=lambda b: (complex(b[0]).real, b[1])
    )
    assert d.structure.r0 == n - rank(B)


def test_zero_stats_examples():
    s = JordanStructure(((G(2), 1), (Z, 2), (Z, 1)))
    assert zero_stats(s) == (2, 1, 3, (2, 1))
    assert zero_stats(jordan_form(mat([[1, 1], [0, 2]])))[::2] == (0, 0)
    assert zero_stats(jordan_form(jordan_matrix([(Z, 4)])))[0::2] == (1, 4)


def test_tail_permutation_examples():
    sigma, P, ells = nilpotent_tail_permutation(JordanStructure(((G(5), 1), (Z, 2), (Z, 1))))
    assert sigma == [1, 2, 3, 4] and ells == [3, 4]
    sigma, P, ells = nilpotent_tail_permutation(JordanStructure(((Z, 2), (Z, 2))))
    assert sigma == [1, 3, 2, 4] and ells == [2, 4]
    sigma, _, ells = nilpotent_tail_permutation(JordanStructure(((G(1), 2), (G(2), 1))))
    assert sigma == [1, 2, 3] and ells == []


def test_tail_permutation_moves_ell_rows_last():
    rng = random.Random(2)
    structure = JordanStructure(((G(1), 1), (Z, 3), (Z, 2), (Z, 1)))
    sigma, P, ells = nilpotent_tail_permutation(structure)
    C = random_invertible(rng, 7, 5, integer=True)
    CP = matmul(matmul(inverse(P), C), P)
    r0 = len(ells)
    for pos, ell in enumerate(ells):
        row = CP[7 - r0 + pos]
        # rows move together with their columns
        assert sorted(map(str, row)) == sorted(map(str, C[ell - 1]))
    assert {sigma[e - 1] for e in ells} == set(range(7 - r0 + 1, 8))


def test_tail_permutation_bad_ordering():
    with pytest.raises(BadOrdering):
        nilpotent_tail_permutation(JordanStructure(((Z, 1), (G(1), 1))))


@given(st.integers(0, 10 ** 6))
def test_zero_split_exact(seed):
    rng = random.Random(seed)
    blocks = [(G(rng.choice([-2, 1, 3])), rng.randint(1, 2)) for _ in range(rng.randint(0, 2))]
    blocks += [(Z, m) for m in sorted((rng.randint(1, 3) for _ in range(rng.randint(0, 3))), reverse=True)]
    if not blocks:
        blocks = [(Z, 1)]
    B = conjugate(rng, jordan_matrix(blocks))
    split = zero_split(B)
    assert split.partition == tuple(m for lam, m in blocks if lam == 0)
    assert (matmul(matmul(split.S_inv, B), split.S) == split.J).all()
    d = split.n - split.n0
    assert d == 0 or rank(split.Bprime) == d
