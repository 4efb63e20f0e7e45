"""Dispatcher: reduce, pick a construction, take roots, verify."""

from __future__ import annotations

import logging

from ..exceptions import IllConditioned, InvariantViolation, PreconditionViolated
from ..linalg import mat_pow, matmul, norm_inf, to_approx_matrix
from ..powers import matrix_kth_root
from . import constructions as cons
from .lowdim import IN_IMAGE, construct, membership_n3
from .reduction import reduce, verdict
from .types import NOT_IN_IMAGE, NOT_SURJECTIVE, SOLVED, UNRESOLVED, DecompositionResult

__all__ = ["solve", "plan_for", "realize", "residual"]

log = logging.getLogger(__name__)

#: precision multipliers tried when a root misses the residual bound
ESCALATION = (1, 2, 4)


def plan_for(red, seed=0, retries=64):
    """A plan ``(D, T)`` for ``Ctilde``, or a certificate, in reduced coordinates.

    Returns ``(plan, certificate, attempts)``.
    """
    inst, layout, Ct = red.instance, red.layout, red.Ctilde
    k, profile = inst.k, inst.profile
    if layout.r0 == 0:
        return cons.plan_invertible(layout.Jprime, Ct, profile), None, 1
    if layout.r0 == 1:
        if layout.nprime == 0:
            return cons.plan_full_nilpotent(Ct, profile), None, 1
        return cons.plan_one_nilpotent_block(layout, Ct, k, profile), None, 1
    v = verdict(layout.n, k, layout.r0)
    if layout.n == 3 and layout.r0 == 2 and v.tag == NOT_SURJECTIVE and membership_n3(layout, Ct, k, profile) != IN_IMAGE:
        cert = (
            "Z-test: in Jordan coordinates C = [[mu, u], [0, M]] with M != 0 and "
            f"M^2 = 0, which is outside the image for n = 3, r0 = 2, k = {k}"
        )
        return None, cert, 0
    return construct(layout, Ct, k, profile, seed=seed, retries=retries)


def residual(inst, X1, X2, profile=None):
    """``||A1 X1^k + A2 X2^k - C||_inf``."""
    profile = profile or inst.profile
    A1 = to_approx_matrix(inst.A1, profile)
    A2 = to_approx_matrix(inst.A2, profile)
    C = to_approx_matrix(inst.C, profile)
    k = inst.k
    return norm_inf(matmul(A1, mat_pow(X1, k)) + matmul(A2, mat_pow(X2, k)) - C, profile)


def realize(red, plan):
    """Roots of ``D`` and ``T`` pulled back to the original coordinates.

    The roots are recomputed at doubled, then quadrupled, precision if the
    residual misses ``eps_residual``.  Returns ``(X1, X2, residual)``.
    """
    inst = red.instance
    base = inst.profile
    bound = base.eps_residual
    last = None
    for factor in ESCALATION:
        profile = base if factor == 1 else base.with_precision(base.precision_bits * factor)
        try:
            Y1 = matrix_kth_root(plan.D, inst.k, profile)
            Y2 = matrix_kth_root(plan.T, inst.k, profile)
        except IllConditioned as exc:
            last = exc
            log.debug("root failed at %d bits: %s", profile.precision_bits, exc)
            continue
        g = to_approx_matrix(red.g, profile)
        g_inv = to_approx_matrix(red.g_inv, profile)
        X1 = matmul(matmul(g_inv, Y1), g)
        X2 = matmul(matmul(g_inv, Y2), g)
        res = residual(inst, X1, X2, profile)
        if res <= bound:
            return X1, X2, res
        last = IllConditioned(f"residual {res} exceeds {bound} at {profile.precision_bits} bits")
        log.debug("%s", last)
    raise last


def solve(inst, seed=0, retries=64) -> DecompositionResult:
    """Decide ``C = A1 X1^k + A2 X2^k`` and construct a verified solution.

    Routes: invertible ``B``; a single nilpotent block with or without an
    invertible part; and for several nilpotent blocks the obstruction
    certificates followed by the constructions of :func:`construct` and a
    seeded random search.  ``Solved`` results always carry a residual below
    ``eps_residual``.
    """
    if inst.C is None:
        raise PreconditionViolated("solve needs a target C")
    red = reduce(inst)
    plan, cert, attempts = plan_for(red, seed=seed, retries=retries)
    if cert is not None:
        return DecompositionResult(tag=NOT_IN_IMAGE, route="certificate", certificate=cert, attempts=attempts)
    if plan is None:
        return DecompositionResult(tag=UNRESOLVED, route="search_exhausted", attempts=attempts)
    if not cons._both_powers(plan, inst.k, inst.profile):
        raise InvariantViolation(f"route {plan.route} produced a factor that is not a k-th power")
    X1, X2, res = realize(red, plan)
    return DecompositionResult(
        tag=SOLVED, route=plan.route, X1=X1, X2=X2, residual=res, attempts=attempts
    )
