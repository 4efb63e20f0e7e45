"""Value types shared by the decomposer routines."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..arithmetic import DEFAULT_PROFILE, ToleranceProfile
from ..exceptions import BadOrdering, PreconditionViolated
from ..jordan import jordan_form, jordan_matrix, nilpotent_tail_permutation
from ..linalg import asmat, is_exact_matrix, rank, to_approx_matrix, zeros
from ..arithmetic import ZERO

SURJECTIVE = "surjective"
NOT_SURJECTIVE = "not_surjective"
UNKNOWN = "unknown"

SOLVED = "solved"
NOT_IN_IMAGE = "not_in_image"
UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Verdict:
    """Surjectivity verdict for ``(n, k, r0)`` with the rule that produced it.

    ``reason`` is one of ``r0_at_most_one``, ``miller_obstruction``,
    ``low_dim_inequality`` or ``open_region``.
    """

    tag: str
    reason: str
    n: int
    k: int
    r0: int

    def to_dict(self):
        return {"verdict": self.tag, "reason": self.reason, "n": self.n, "k": self.k, "r0": self.r0}


@dataclass(frozen=True, eq=False)
class DecompositionResult:
    """Outcome of a decomposition attempt.

    ``tag`` is ``solved`` (with ``X1``, ``X2`` and the verified ``residual``),
    ``not_in_image`` (with a human-readable ``certificate``) or
    ``unresolved``.  ``route`` names the construction that decided it.
    """

    tag: str
    route: str
    X1: Optional[np.ndarray] = None
    X2: Optional[np.ndarray] = None
    residual: Optional[object] = None
    certificate: Optional[str] = None
    attempts: int = 0

    @property
    def solved(self):
        return self.tag == SOLVED


@dataclass(frozen=True, eq=False)
class Layout:
    """Shape of a reduced coefficient ``J = J' (+) N``.

    ``Jprime`` is any invertible ``n' x n'`` matrix (a Jordan matrix in the
    textbook setting); ``N`` is the nilpotent Jordan matrix with block sizes
    ``partition`` in decreasing order.  All indices are 0-based.
    """

    Jprime: np.ndarray
    partition: Tuple[int, ...]

    @property
    def nprime(self):
        return self.Jprime.shape[0]

    @property
    def n0(self):
        return sum(self.partition)

    @property
    def n(self):
        return self.nprime + self.n0

    @property
    def r0(self):
        return len(self.partition)

    @functools.cached_property
    def starts(self):
        out, pos = [], self.nprime
        for m in self.partition:
            out.append(pos)
            pos += m
        return tuple(out)

    @functools.cached_property
    def ells(self):
        return tuple(s + m - 1 for s, m in zip(self.starts, self.partition))

    @functools.cached_property
    def free(self):
        ells = set(self.ells)
        return tuple(i for i in range(self.n) if i not in ells)

    @functools.cached_property
    def perm(self):
        """``C^P = C[perm][:, perm]``: free rows in order, then the ``ell`` rows."""
        return self.free + self.ells

    @functools.cached_property
    def J(self):
        exact = is_exact_matrix(self.Jprime)
        out = zeros(self.n) if exact else to_approx_matrix(zeros(self.n))
        d = self.nprime
        out[:d, :d] = self.Jprime
        nil = jordan_matrix((ZERO, m) for m in self.partition)
        out[d:, d:] = nil if exact else to_approx_matrix(nil)
        return out

    def permute(self, M):
        p = list(self.perm)
        return np.array(M[np.ix_(p, p)], dtype=object)

    def unpermute(self, Mp):
        out = np.empty(Mp.shape, dtype=object)
        p = list(self.perm)
        out[np.ix_(p, p)] = Mp
        return out

    def tail_permutation(self):
        return nilpotent_tail_permutation((self.n, self.partition))

    @classmethod
    def from_matrix(cls, J, profile=DEFAULT_PROFILE):
        """Read ``J' (+) N`` off a matrix whose nilpotent Jordan blocks sit in
        the lower-right corner in decreasing size order."""
        J = asmat(J, profile)
        n = J.shape[0]
        lowest = n
        while lowest > 0 and J[lowest - 1, lowest - 1] == 0:
            lowest -= 1
        problem = None
        for p in range(lowest, n + 1):
            try:
                return cls._split_at(J, p, profile)
            except (PreconditionViolated, BadOrdering) as exc:
                problem = problem or exc
        raise problem

    @classmethod
    def _split_at(cls, J, p, profile):
        n = J.shape[0]
        for i in range(p, n):
            for j in range(p, n):
                x = J[i, j]
                if x != 0 and not (j == i + 1 and x == 1):
                    raise PreconditionViolated("nilpotent part is not in Jordan form")
        if any(J[i, j] != 0 for i in range(p) for j in range(p, n)) or any(
            J[i, j] != 0 for i in range(p, n) for j in range(p)
        ):
            raise PreconditionViolated("J is not block diagonal J' (+) N")
        sizes, run = [], 0
        for i in range(p, n):
            run += 1
            if i == n - 1 or J[i, i + 1] == 0:
                sizes.append(run)
                run = 0
        if sizes != sorted(sizes, reverse=True):
            raise BadOrdering("zero blocks must appear in decreasing size order")
        Jprime = np.array(J[:p, :p], dtype=object)
        if p and rank(Jprime, profile) < p:
            raise BadOrdering("J' must be invertible and precede the zero blocks")
        return cls(Jprime=Jprime, partition=tuple(sizes))


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """``A1 X1^k + A2 X2^k = C`` with ``A1`` invertible; ``C`` is optional for
    verdict-only queries."""

    A1: np.ndarray
    A2: np.ndarray
    k: int
    C: Optional[np.ndarray] = None
    profile: ToleranceProfile = field(default=DEFAULT_PROFILE)

    @property
    def n(self):
        return self.A1.shape[0]


@dataclass(frozen=True, eq=False)
class ReducedInstance:
    """``B = A1^{-1} A2`` with ``g B g^{-1} = J`` and ``Ctilde = g A1^{-1} C g^{-1}``.

    ``J = J' (+) N`` separates the zero eigenvalue exactly; ``J'`` carries
    the invertible part of ``B`` without being diagonalised.  The full
    Jordan decomposition of ``B`` is computed on demand.
    """

    instance: ProblemInstance
    B: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    layout: Layout
    Ctilde: Optional[np.ndarray]

    @property
    def J(self):
        return self.layout.J

    @functools.cached_property
    def jordan(self):
        return jordan_form(self.B, self.instance.profile)
