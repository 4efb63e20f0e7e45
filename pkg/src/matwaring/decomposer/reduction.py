"""Reduction to a single coefficient and the surjectivity verdict."""

from __future__ import annotations

from ..arithmetic import DEFAULT_PROFILE
from ..exceptions import BadOrdering, DimensionMismatch, PreconditionViolated, Singular
from ..jordan import zero_split
from ..linalg import asmat, eye, inverse, is_exact_matrix, matmul, rank
from .types import (
    NOT_SURJECTIVE,
    SURJECTIVE,
    UNKNOWN,
    Layout,
    ProblemInstance,
    ReducedInstance,
    Verdict,
)

__all__ = ["make_instance", "reduce", "verdict"]


def make_instance(A1, A2, k, C=None, profile=DEFAULT_PROFILE) -> ProblemInstance:
    """Validate shapes and ``k`` and coerce the matrices."""
    A1, A2 = asmat(A1, profile), asmat(A2, profile)
    if A1.shape != A2.shape:
        raise DimensionMismatch(f"A1 is {A1.shape} but A2 is {A2.shape}")
    if C is not None:
        C = asmat(C, profile)
        if C.shape != A1.shape:
            raise DimensionMismatch(f"target is {C.shape} but coefficients are {A1.shape}")
    if int(k) != k or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    return ProblemInstance(A1=A1, A2=A2, k=int(k), C=C, profile=profile)


def reduce(inst: ProblemInstance) -> ReducedInstance:
    """``B = A1^{-1} A2`` and an exact similarity ``g B g^{-1} = J' (+) N``.

    The nilpotent part ``N`` is in Jordan form with decreasing block sizes;
    ``J'`` is the (invertible) restriction of ``B`` to the image of a high
    power of ``B``.  With ``Ctilde = g A1^{-1} C g^{-1}``, any solution of
    ``Ctilde = Y1^k + J Y2^k`` gives ``X_i = g^{-1} Y_i g``.
    """
    profile = inst.profile
    if rank(inst.A1, profile) < inst.n:
        raise Singular("A1 is not invertible")
    A1_inv = inverse(inst.A1, profile)
    B = matmul(A1_inv, inst.A2)
    layout = _as_layout(B, profile)
    if layout is not None:
        g = g_inv = eye(inst.n)
    else:
        split = zero_split(B, profile)
        g, g_inv = split.S_inv, split.S
        layout = Layout(Jprime=split.Bprime, partition=split.partition)
    Ct = None
    if inst.C is not None:
        Ct = matmul(matmul(g, matmul(A1_inv, inst.C)), g_inv)
    return ReducedInstance(instance=inst, B=B, g=g, g_inv=g_inv, layout=layout, Ctilde=Ct)


def _as_layout(B, profile):
    """``B`` itself when it already has the ``J' (+) N`` shape, else ``None``."""
    if not is_exact_matrix(B):
        return None
    try:
        return Layout.from_matrix(B, profile)
    except (PreconditionViolated, BadOrdering):
        return None


def verdict(n: int, k: int, r0: int) -> Verdict:
    """Surjectivity of ``(X1, X2) -> A1 X1^k + A2 X2^k`` from ``(n, k, r0)``."""
    if k < 2 or not 0 <= r0 <= n:
        raise ValueError(f"need k >= 2 and 0 <= r0 <= n, got n={n}, k={k}, r0={r0}")
    if r0 <= 1:
        return Verdict(SURJECTIVE, "r0_at_most_one", n, k, r0)
    if n <= k * (r0 - 1):
        return Verdict(NOT_SURJECTIVE, "miller_obstruction", n, k, r0)
    if n in (3, 4):
        return Verdict(SURJECTIVE, "low_dim_inequality", n, k, r0)
    return Verdict(UNKNOWN, "open_region", n, k, r0)
