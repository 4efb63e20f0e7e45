"""k-th powers of matrices: nilpotent block calculus and matrix k-th roots.

Only the zero eigenvalue can obstruct a k-th root.  The k-th power of
``J_{0,n}`` splits into ``k`` blocks whose sizes differ by at most one, so a
nilpotent partition is a k-th power exactly when it is the blockwise image of
some partition of the same weight.
"""

from __future__ import annotations

import numpy as np

from .arithmetic import DEFAULT_PROFILE, ZERO, kth_root_scalar, to_approx
from .exceptions import IllConditioned, NotAPowerError
from .jordan import _kernel_chains, jordan_form, jordan_matrix, zero_split
from .linalg import (
    inverse,
    mat_pow,
    matmul,
    max_abs,
    rank,
    to_approx_matrix,
    zeros,
)

__all__ = [
    "Partition",
    "miller_power",
    "partition_power",
    "partitions",
    "kth_power_witness",
    "nilpotent_partition",
    "is_kth_power",
    "matrix_kth_root",
]


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        return super().__new__(cls, sorted(parts, reverse=True))

    @property
    def weight(self):
        return sum(self)

    def __repr__(self):
        return f"Partition({list(self)})"


def _check_k(k):
    if not isinstance(k, (int, np.integer)) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")


def miller_power(n: int, k: int) -> Partition:
    """Block sizes of ``J_{0,n}**k``.

    With ``n = qk + m`` (``0 <= m < k``) there are ``m`` blocks of size
    ``q + 1`` and ``k - m`` of size ``q``; zero-size blocks are dropped, so
    ``n <= k`` gives ``n`` blocks of size one.
    """
    _check_k(k)
    if n < 1:
        raise ValueError("n must be positive")
    q, m = divmod(n, k)
    return Partition([q + 1] * m + [q] * (k - m) if q else [1] * n)


def partition_power(p, k: int) -> Partition:
    """Blockwise k-th power of a nilpotent Jordan structure."""
    _check_k(k)
    parts = []
    for part in p:
        parts.extend(miller_power(part, k))
    return Partition(parts)


def partitions(weight: int):
    """All partitions of ``weight`` in decreasing lexicographic order."""

    def gen(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    for p in gen(weight, weight):
        yield Partition(p)


def kth_power_witness(target, k: int):
    """Lexicographically largest partition whose k-th power is ``target``.

    Returns ``None`` when no partition of the same weight works.
    """
    _check_k(k)
    target = Partition(target)
    if target.weight == 0:
        return Partition()
    # a block of size m contributes min(m, k) parts, so every candidate's
    # largest part is at most k times the target's largest part
    for p in partitions(target.weight):
        if p[0] > k * target[0]:
            continue
        if partition_power(p, k) == target:
            return p
    return None


def nilpotent_partition(M, profile=DEFAULT_PROFILE) -> Partition:
    """Sizes of the zero-eigenvalue Jordan blocks of ``M`` from ranks of powers."""
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    nullities = [0]
    P = M
    while True:
        d = n - rank(P, profile)
        if d == nullities[-1]:
            break
        nullities.append(d)
        if d == n:
            break
        P = matmul(P, M)
    at_least = [nullities[j] - nullities[j - 1] for j in range(1, len(nullities))]
    parts = []
    for j, cnt in enumerate(at_least, start=1):
        nxt = at_least[j] if j < len(at_least) else 0
        parts.extend([j] * (cnt - nxt))
    return Partition(parts)


def is_kth_power(M, k: int, profile=DEFAULT_PROFILE):
    """``(True, witness)`` when ``M`` has a k-th root, else ``(False, None)``.

    The witness is the zero-block partition of a root; the invertible part of
    ``M`` never obstructs.
    """
    _check_k(k)
    witness = kth_power_witness(nilpotent_partition(M, profile), k)
    return witness is not None, witness


def _nilpotent_root(partition, k):
    """Exact ``X`` with ``X**k`` equal to the nilpotent Jordan matrix of
    ``partition`` (blocks in the given order)."""
    witness = kth_power_witness(partition, k)
    if witness is None:
        raise NotAPowerError(f"nilpotent structure {list(partition)} has no {k}-th root")
    Y = jordan_matrix((ZERO, m) for m in witness)
    Yk = mat_pow(Y, k)
    chains = _kernel_chains(Yk, Yk.shape[0], DEFAULT_PROFILE)
    by_size = {}
    for ch in chains:
        by_size.setdefault(len(ch), []).append(ch)
    cols = []
    for m in partition:
        cols.extend(by_size[m].pop())
    Q = np.array(cols, dtype=object).T
    return matmul(matmul(inverse(Q), Y), Q)


def _block_root(lam, m, k, profile):
    """Principal k-th root of ``J_{lam,m}`` as an upper triangular Toeplitz
    matrix; the binomial series stops at the block size."""
    ctx = profile.ctx
    root = kth_root_scalar(lam, k, profile)
    lam_a = to_approx(lam, profile)
    coeffs = [root]
    e = ctx.mpf(1) / k
    for r in range(1, m):
        coeffs.append(coeffs[-1] * (e - (r - 1)) / (r * lam_a))
    X = np.full((m, m), ctx.mpc(0), dtype=object)
    for i in range(m):
        for j in range(i, m):
            X[i, j] = coeffs[j - i]
    return X


def _invertible_root(M, k, profile):
    d = jordan_form(M, profile)
    n = M.shape[0]
    F = to_approx_matrix(zeros(n), profile)
    pos = 0
    for lam, m in d.structure.blocks:
        F[pos : pos + m, pos : pos + m] = _block_root(lam, m, k, profile)
        pos += m
    P = to_approx_matrix(d.P, profile)
    P_inv = to_approx_matrix(inverse(d.P, profile), profile)
    return matmul(matmul(P, F), P_inv)


def matrix_kth_root(M, k: int, profile=DEFAULT_PROFILE):
    """A k-th root of ``M``, verified by residual.

    The zero eigenvalue is split off exactly; its nilpotent part gets the
    shift-matrix root of the witness partition, the invertible part the
    principal primary root computed blockwise on its Jordan form.
    """
    _check_k(k)
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    if n == 0:
        return to_approx_matrix(zeros(0), profile)
    split = zero_split(M, profile)
    d = n - split.n0
    X = to_approx_matrix(zeros(n), profile)
    if split.n0:
        X[d:, d:] = to_approx_matrix(_nilpotent_root(split.partition, k), profile)
    if d:
        X[:d, :d] = _invertible_root(split.Bprime, k, profile)
    S = to_approx_matrix(split.S, profile)
    S_inv = to_approx_matrix(split.S_inv, profile)
    X = matmul(matmul(S, X), S_inv)
    resid = max_abs(mat_pow(X, k) - to_approx_matrix(M, profile), profile)
    if resid > profile.eps_residual * max(1, max_abs(M, profile)):
        raise IllConditioned(f"k-th root residual {resid} exceeds tolerance")
    return X
