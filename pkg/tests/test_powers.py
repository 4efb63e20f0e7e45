import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matwaring.exceptions import NotAPowerError
from matwaring.jordan import jordan_matrix
from matwaring.linalg import eye, mat_pow, max_abs, to_approx_matrix
from matwaring.powers import (
    Partition,
    is_kth_power,
    kth_power_witness,
    matrix_kth_root,
    miller_power,
    nilpotent_partition,
    partition_power,
    partitions,
)
from matwaring.selftest import _oracle_partition, conjugate, random_invertible

from conftest import G, mat

Z = G(0)
EPS = 2 ** -128


@pytest.mark.parametrize("n, k, want", [(5, 2, [3, 2]), (4, 3, [2, 1, 1]), (3, 5, [1, 1, 1]), (6, 3, [2, 2, 2])])
def test_miller_power_examples(n, k, want):
    assert list(miller_power(n, k)) == want


@pytest.mark.parametrize("p, k, want", [([4], 2, [2, 2]), ([2, 2], 2, [1, 1, 1, 1]), ([5, 3], 2, [3, 2, 2, 1])])
def test_partition_power_examples(p, k, want):
    assert list(partition_power(p, k)) == want


def test_partition_power_matches_explicit_matrix():
    N = jordan_matrix([(Z, 5), (Z, 3)])
    assert nilpotent_partition(mat_pow(N, 2)) == Partition([3, 2, 2, 1])


@given(st.integers(1, 12), st.integers(2, 6))
def test_miller_matches_oracle(n, k):
    assert tuple(miller_power(n, k)) == _oracle_partition(n, k)


@given(st.integers(1, 12), st.integers(2, 6))
def test_miller_shape(n, k):
    p = miller_power(n, k)
    assert p.weight == n
    assert max(p) - min(p) <= 1
    assert max(p) == -(-n // k)


def test_partitions_enumeration():
    ps = list(partitions(4))
    assert ps == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert len(list(partitions(8))) == 22


@pytest.mark.parametrize("target, k, want", [([2, 2], 2, [4]), ([2], 3, None), ([1, 1, 1], 2, [2, 1])])
def test_witness_examples(target, k, want):
    w = kth_power_witness(target, k)
    assert (None if w is None else list(w)) == want


@given(st.integers(1, 8), st.integers(2, 4), st.data())
def test_witness_is_exhaustive(weight, k, data):
    target = data.draw(st.sampled_from(list(partitions(weight))))
    w = kth_power_witness(target, k)
    images = {partition_power(p, k) for p in partitions(weight)}
    assert (w is not None) == (Partition(target) in images)
    if w is not None:
        assert partition_power(w, k) == Partition(target)


@given(st.integers(1, 8), st.integers(2, 4), st.data())
def test_witness_respects_miller_bound(weight, k, data):
    target = data.draw(st.sampled_from(list(partitions(weight))))
    if target[0] > -(-weight // k):
        assert kth_power_witness(target, k) is None


def test_is_kth_power_examples():
    assert is_kth_power(eye(3), 4)[0]
    assert not is_kth_power(jordan_matrix([(Z, 2)]), 3)[0]
    ok, w = is_kth_power(jordan_matrix([(Z, 2), (Z, 2)]), 2)
    assert ok and list(w) == [4]


def test_root_examples():
    assert max_abs(matrix_kth_root(eye(3), 3) - to_approx_matrix(eye(3))) < EPS
    X = matrix_kth_root(mat([[4, 0], [0, 9]]), 2)
    assert max_abs(X - to_approx_matrix(mat([[2, 0], [0, 3]]))) < EPS
    X = matrix_kth_root(jordan_matrix([(G(1), 2)]), 2)
    assert max_abs(X - to_approx_matrix(mat([[1, "1/2"], [0, 1]]))) < EPS


def test_root_rejects_non_powers():
    with pytest.raises(NotAPowerError):
        matrix_kth_root(jordan_matrix([(Z, 2)]), 2)


@given(st.integers(0, 10 ** 6))
def test_root_roundtrip_invertible(seed):
    rng = random.Random(seed)
    n, k = rng.randint(1, 4), rng.randint(2, 5)
    M = random_invertible(rng, n)
    X = matrix_kth_root(M, k)
    assert max_abs(mat_pow(X, k) - to_approx_matrix(M)) <= EPS


@given(st.integers(0, 10 ** 6))
def test_root_with_nilpotent_part(seed):
    rng = random.Random(seed)
    k = rng.randint(2, 3)
    witness = [rng.randint(1, 4) for _ in range(rng.randint(1, 2))]
    target = partition_power(witness, k)
    blocks = [(G(rng.choice([-1, 2])), 1)] + [(Z, m) for m in target]
    M = conjugate(rng, jordan_matrix(blocks))
    assert is_kth_power(M, k)[0]
    X = matrix_kth_root(M, k)
    assert max_abs(mat_pow(X, k) - to_approx_matrix(M)) <= EPS
