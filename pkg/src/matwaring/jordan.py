"""Jordan canonical form, nilpotent statistics and the tail permutation.

Nonzero-eigenvalue blocks come first (ordered by ``|lambda|`` descending,
then argument ascending, then size descending) and zero blocks last
(size descending).  When every eigenvalue of an exact matrix is a Gaussian
rational the similarity is exact; otherwise it is computed at the profile's
working precision and checked by residual.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .arithmetic import DEFAULT_PROFILE, ONE, ZERO, GaussianRational, root_clusters
from .exceptions import BadOrdering, IllConditioned
from .linalg import (
    SpanTracker,
    eye,
    inverse,
    is_exact_matrix,
    matmul,
    max_abs,
    nullspace,
    rank,
    to_approx_matrix,
    zeros,
    char_poly,
)

__all__ = [
    "JordanStructure",
    "JordanDecomposition",
    "ZeroSplit",
    "jordan_block",
    "jordan_matrix",
    "jordan_form",
    "zero_split",
    "zero_stats",
    "nilpotent_tail_permutation",
]


def jordan_block(lam, m):
    """``m x m`` block with ``lam`` on the diagonal and ones above it."""
    lam = lam if not isinstance(lam, int) else GaussianRational(lam)
    z = lam * 0
    J = np.full((m, m), z, dtype=object)
    for i in range(m):
        J[i, i] = lam
        if i + 1 < m:
            J[i, i + 1] = z + 1
    return J


def jordan_matrix(blocks):
    """Direct sum of ``jordan_block(lam, m)`` for ``(lam, m)`` in ``blocks``."""
    blocks = list(blocks)
    n = sum(m for _, m in blocks)
    approx = [lam for lam, _ in blocks if not isinstance(lam, (int, GaussianRational))]
    z = approx[0] * 0 if approx else ZERO
    J = np.full((n, n), z, dtype=object)
    pos = 0
    for lam, m in blocks:
        J[pos : pos + m, pos : pos + m] = jordan_block(z + lam, m)
        pos += m
    return J


@dataclass(frozen=True)
class JordanStructure:
    """Block list ``((eigenvalue, size), ...)`` in canonical order."""

    blocks: Tuple[tuple, ...]

    @property
    def n(self):
        return sum(m for _, m in self.blocks)

    @property
    def r0(self):
        return sum(1 for lam, _ in self.blocks if lam == 0)

    @property
    def r_prime(self):
        return len(self.blocks) - self.r0

    @property
    def n0(self):
        return sum(m for lam, m in self.blocks if lam == 0)

    @property
    def zero_partition(self):
        return tuple(sorted((m for lam, m in self.blocks if lam == 0), reverse=True))

    def __str__(self):
        return ", ".join(f"({lam},{m})" for lam, m in self.blocks)


@dataclass(frozen=True, eq=False)
class JordanDecomposition:
    """``B = P J P^{-1}`` with ``J`` in canonical block order."""

    P: np.ndarray
    J: np.ndarray
    structure: JordanStructure
    residual: object = 0

    @property
    def Jprime(self):
        d = self.structure.n - self.structure.n0
        return np.array(self.J[:d, :d], dtype=object)

    @property
    def P_inv(self):
        return inverse(self.P)


@dataclass(frozen=True, eq=False)
class ZeroSplit:
    """Exact similarity ``S^{-1} B S = B' (+) N`` separating the zero eigenvalue.

    ``Bprime`` is invertible (it is ``B`` restricted to ``im B^nu``); ``N`` is
    the nilpotent part already in Jordan form with blocks ``partition``.
    """

    S: np.ndarray
    S_inv: np.ndarray
    Bprime: np.ndarray
    partition: Tuple[int, ...]

    @property
    def n(self):
        return self.S.shape[0]

    @property
    def n0(self):
        return sum(self.partition)

    @property
    def r0(self):
        return len(self.partition)

    @property
    def J(self):
        d = self.n - self.n0
        exact = is_exact_matrix(self.Bprime)
        out = zeros(self.n) if exact else to_approx_matrix(zeros(self.n))
        out[:d, :d] = self.Bprime
        N = jordan_matrix((ZERO, m) for m in self.partition)
        out[d:, d:] = N if exact else to_approx_matrix(N)
        return out


def _kernel_chains(N, mult, profile):
    """Jordan chains of ``N`` on its generalised kernel of dimension ``mult``.

    Returns chains ``[x_1, ..., x_j]`` (``N x_1 = 0``, ``N x_i = x_{i-1}``),
    longest first.
    """
    n = N.shape[0]
    exact = is_exact_matrix(N)
    tol = None if exact else profile.eps_rank
    kernels = [[]]
    Nj = N
    while len(kernels[-1]) < mult:
        basis = nullspace(Nj, profile)
        if len(basis) <= len(kernels[-1]) or len(basis) > mult or len(kernels) > n:
            raise IllConditioned("generalised kernel dimensions are inconsistent")
        kernels.append(basis)
        Nj = matmul(Nj, N)
    p = len(kernels) - 1
    chains = []
    for j in range(p, 0, -1):
        span = SpanTracker(n, tol)
        for v in kernels[j - 1]:
            span.add(v)
        for ch in chains:
            if len(ch) >= j:
                span.add(ch[j - 1])
        needed = len(kernels[j]) - len(kernels[j - 1]) - sum(1 for ch in chains if len(ch) >= j)
        for v in kernels[j]:
            if needed == 0:
                break
            if span.add(v):
                chain = [v]
                for _ in range(j - 1):
                    chain.append(N.dot(chain[-1]))
                chain.reverse()
                chains.append(chain)
                needed -= 1
        if needed:
            raise IllConditioned("could not complete Jordan chains")
    chains.sort(key=len, reverse=True)
    return chains


def _cluster_sort_key(value):
    return (-abs(value), cmath.phase(complex(value)))


def jordan_form(B, profile=DEFAULT_PROFILE) -> JordanDecomposition:
    """Jordan decomposition ``B = P J P^{-1}`` in canonical block order.

    Eigenvalues are the clustered roots of the characteristic polynomial;
    block sizes come from the ranks of powers of ``B - lambda I``; ``P`` is
    assembled from generalised-eigenvector chains and the similarity residual
    is verified.
    """
    B = np.asarray(B, dtype=object)
    n = B.shape[0]
    exact_in = is_exact_matrix(B)
    clusters = root_clusters(char_poly(B, profile), profile)
    all_exact = exact_in and all(cl.exact is not None for cl in clusters)
    Bw = B if all_exact else to_approx_matrix(B, profile)
    ident = eye(n) if all_exact else to_approx_matrix(eye(n), profile)
    pieces = []  # (sort key, eigenvalue, chain)
    for cl in clusters:
        lam = cl.exact if all_exact else profile.ctx.mpc(cl.value)
        if cl.exact is not None:
            is_zero = cl.exact == 0
        else:
            is_zero = abs(cl.value) <= profile.eps_cluster
        if is_zero:
            lam = lam * 0
        chains = _kernel_chains(Bw - lam * ident, cl.multiplicity, profile)
        for ch in chains:
            if is_zero:
                key = (1, 0, 0.0, -len(ch))
            else:
                key = (0,) + _cluster_sort_key(cl.value) + (-len(ch),)
            pieces.append((key, lam, ch))
    pieces.sort(key=lambda t: t[0])
    cols = [v for _, _, ch in pieces for v in ch]
    if len(cols) != n:
        raise IllConditioned("Jordan chains do not span the space")
    P = np.array(cols, dtype=object).T
    J = jordan_matrix((lam, len(ch)) for _, lam, ch in pieces)
    structure = JordanStructure(tuple((lam, len(ch)) for _, lam, ch in pieces))
    try:
        P_inv = inverse(P, profile)
    except Exception as exc:
        raise IllConditioned(f"similarity is singular: {exc}") from None
    resid = max_abs(matmul(matmul(P, J), P_inv) - Bw, profile)
    if resid > profile.eps_residual * max(1, max_abs(B, profile)):
        raise IllConditioned(f"Jordan similarity residual {resid} too large")
    return JordanDecomposition(P=P, J=J, structure=structure, residual=resid)


def zero_split(B, profile=DEFAULT_PROFILE) -> ZeroSplit:
    """Separate the zero eigenvalue of ``B`` without touching the others.

    With ``nu`` the stabilisation index of ``rank(B**j)``, the columns of
    ``B**nu`` span an invariant complement of the generalised kernel on which
    ``B`` is invertible.  The kernel part is put in Jordan form by chains, so
    exact inputs give an exact split regardless of the nonzero spectrum.
    """
    B = np.asarray(B, dtype=object)
    n = B.shape[0]
    exact = is_exact_matrix(B)
    if not exact:
        B = to_approx_matrix(B, profile)
    ranks = [n]
    Bj = eye(n) if exact else to_approx_matrix(eye(n), profile)
    while True:
        Bj = matmul(Bj, B)
        r = rank(Bj, profile)
        if r == ranks[-1]:
            break
        ranks.append(r)
    n0 = n - ranks[-1]
    tol = None if exact else profile.eps_rank
    image = []
    span = SpanTracker(n, tol)
    for c in range(n):
        col = Bj[:, c]
        if span.add(col):
            image.append(col)
    if len(image) != n - n0:
        raise IllConditioned("image of B**nu has unexpected dimension")
    chains = _kernel_chains(B, n0, profile) if n0 else []
    cols = image + [v for ch in chains for v in ch]
    S = np.array(cols, dtype=object).T if cols else zeros(0)
    S_inv = inverse(S, profile)
    M = matmul(matmul(S_inv, B), S)
    d = n - n0
    Bprime = np.array(M[:d, :d], dtype=object)
    partition = tuple(len(ch) for ch in chains)
    split = ZeroSplit(S=S, S_inv=S_inv, Bprime=Bprime, partition=partition)
    if exact:
        if not (M == split.J).all():
            raise IllConditioned("zero split failed exact verification")
    elif max_abs(M - split.J, profile) > profile.eps_rank * max(1, max_abs(B, profile)):
        raise IllConditioned("zero split residual too large")
    return split


def zero_stats(d):
    """``(r0, r_prime, n0, zero_partition)`` of a decomposition or structure."""
    s = d.structure if isinstance(d, JordanDecomposition) else d
    return s.r0, s.r_prime, s.n0, s.zero_partition


def nilpotent_tail_permutation(structure):
    """Permutation moving the last row of every zero block to the end.

    ``structure`` is a :class:`JordanStructure` (or a ``(n, zero_partition)``
    pair for a ``J' (+) zero blocks`` layout).  Returns ``(sigma, P, ells)``
    with 1-based ``sigma[i-1] = sigma(i)`` and ``ells``, and the 0/1 matrix
    ``P`` with ``P[i, sigma(i)] = 1`` so that ``P^{-1} C P`` lists the rows
    ``ell_1 .. ell_{r0}`` last.
    """
    if isinstance(structure, JordanStructure):
        blocks = structure.blocks
        seen_zero = False
        for lam, _ in blocks:
            if lam == 0:
                seen_zero = True
            elif seen_zero:
                raise BadOrdering("nonzero-eigenvalue block after a zero block")
        n = structure.n
        sizes = [m for lam, m in blocks if lam == 0]
    else:
        n, sizes = structure
        sizes = list(sizes)
    n0 = sum(sizes)
    r0 = len(sizes)
    ells = []
    acc = n - n0
    for m in sizes:
        acc += m
        ells.append(acc)
    ell_pos = {l: s for s, l in enumerate(ells, start=1)}
    sigma = []
    for i in range(1, n + 1):
        if i <= n - n0:
            sigma.append(i)
        elif i in ell_pos:
            sigma.append(n - r0 + ell_pos[i])
        else:
            sigma.append(i - sum(1 for l in ells if l < i))
    P = zeros(n)
    for i, s in enumerate(sigma):
        P[i, s - 1] = ONE
    return sigma, P, ells
