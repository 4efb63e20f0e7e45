"""Several nilpotent blocks: obstruction certificates and the route list.

In ``P``-coordinates the last rows of the zero blocks move to the bottom and
``(C - JT)^P`` keeps the lower blocks ``C21^P`` and ``C22^P`` of ``C`` for
every ``T``.  When ``C21^P = 0`` the matrix ``(C - JT)^P`` is block upper
triangular, its minimal polynomial is divisible by that of ``C22^P``, and a
zero block of ``C22^P`` larger than ``ceil(n/k)`` rules out every k-th root.
"""

from __future__ import annotations

import math
import random

import numpy as np

from ..arithmetic import DEFAULT_PROFILE, GaussianRational
from ..exceptions import OutOfRegime, PreconditionViolated
from ..jordan import jordan_matrix
from ..linalg import matmul, rank
from ..powers import is_kth_power, nilpotent_partition
from . import constructions as cons
from .types import Layout

__all__ = [
    "miller_certificate",
    "membership_n3",
    "non_surjectivity_witness",
    "plan_miller_witness",
    "plan_random_search",
    "construct",
    "solve_low_dim",
    "IN_IMAGE",
]

IN_IMAGE = "in_image"


def _blocks(layout: Layout, C):
    ells, free = list(layout.ells), list(layout.free)
    C21 = np.array(C[np.ix_(ells, free)], dtype=object)
    C22 = np.array(C[np.ix_(ells, ells)], dtype=object)
    return C21, C22


def miller_certificate(layout: Layout, C, k, profile=DEFAULT_PROFILE):
    """A text certificate that ``C`` is outside the image, or ``None``.

    Fires when ``C21^P = 0`` and ``C22^P`` has a zero Jordan block of size
    ``> ceil(n/k)``; every k-th power has zero blocks of size at most
    ``ceil(n/k)``.
    """
    if layout.r0 < 2:
        return None
    C21, C22 = _blocks(layout, C)
    if not cons.is_zero_matrix(C21, profile):
        return None
    part = nilpotent_partition(C22, profile)
    bound = math.ceil(layout.n / k)
    if part and part[0] > bound:
        return (
            f"C21^P = 0 and C22^P has a zero Jordan block of size {part[0]} > "
            f"ceil(n/k) = {bound}; C - JT then has a zero block of at least that "
            f"size for every T, so it is never a {k}-th power"
        )
    return None


def membership_n3(layout: Layout, C, k, profile=DEFAULT_PROFILE):
    """``not_in_image`` or ``in_image`` for ``n = 3``, ``r0 = 2``, ``k >= 3``.

    ``C`` is in Jordan coordinates of the coefficient.  The excluded targets
    are ``[[mu, u], [0, M]]`` (after moving the last row of each zero block
    to the bottom) with ``M != 0`` and ``M^2 = 0``.
    """
    if layout.n != 3 or layout.r0 != 2 or k < 3:
        raise OutOfRegime("membership_n3 needs n = 3, r0 = 2 and k >= 3")
    C21, M = _blocks(layout, C)
    if (
        cons.is_zero_matrix(C21, profile)
        and not cons.is_zero_matrix(M, profile)
        and cons.is_zero_matrix(matmul(M, M), profile)
    ):
        return "not_in_image"
    return IN_IMAGE


def non_surjectivity_witness(J, k, profile=DEFAULT_PROFILE):
    """Target ``C`` outside the image together with a checker for any ``T``.

    ``C`` is zero except ``C22^P = J_{0,r0}``; ``checker(T)`` returns ``True``
    when ``C - JT`` is not a k-th power, which holds for every ``T`` by the
    Miller bound.
    """
    layout = J if isinstance(J, Layout) else Layout.from_matrix(J, profile)
    n, r0 = layout.n, layout.r0
    if r0 < 2 or n > k * (r0 - 1):
        raise OutOfRegime(f"no witness: needs r0 >= 2 and n <= k(r0-1), got n={n}, k={k}, r0={r0}")
    Cp = cons._zeros_like(layout.J, n)
    q = n - r0
    Cp[q:, q:] = jordan_matrix([(GaussianRational(0), r0)])
    C = layout.unpermute(Cp)

    def checker(T):
        D = C - matmul(cons._j_like(layout, C), T)
        return not is_kth_power(D, k, profile)[0]

    return C, checker


# -- candidate searches -------------------------------------------------------------


def _random_gaussian(rng, n, m, bound=3):
    return np.array(
        [[GaussianRational(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(m)] for _ in range(n)],
        dtype=object,
    )


def _accept(layout, C, D, T, k, route, profile):
    plan = cons.Plan(D=D, T=T, route=route)
    if cons._both_powers(plan, k, profile):
        return cons._check_plan(layout, C, plan, profile)
    return None


def plan_miller_witness(layout: Layout, C, k, profile=DEFAULT_PROFILE, seed=0, retries=16):
    """``C21^P = 0`` with ``C22^P`` nilpotent: keep ``D`` similar to
    ``0 (+) C22^P`` and search the free rows of ``T``.

    Free rows ``D^P[f] = (0 | r_f C22^P)`` conjugate ``D^P`` to
    ``0 (+) C22^P`` by ``[[I, R], [0, I]]``, so ``D`` is a k-th power exactly
    when that partition is; the remaining freedom (``R`` and the first rows of
    the zero blocks of ``T``) is searched and every candidate is verified.
    """
    n, q, r0 = layout.n, layout.n - layout.r0, layout.r0
    C21, C22 = _blocks(layout, C)
    if not cons.is_zero_matrix(C21, profile):
        raise PreconditionViolated("Miller-witness route needs C21^P = 0")
    if not is_kth_power(cons._zeros_like(C, q, q), k, profile)[0]:
        return None
    base = cons._zeros_like(C, n)
    base[q:, q:] = C22
    if not is_kth_power(base, k, profile)[0]:
        return None
    Cp = layout.permute(C)
    rng = random.Random(seed)
    choices = [cons._zeros_like(C, q, r0)]
    choices += [_random_gaussian(rng, q, r0, 2) for _ in range(retries)]
    starts = layout.starts
    for R in choices:
        Dp = Cp.copy()
        Dp[:q, :q] = cons._zeros_like(C, q, q)
        Dp[:q, q:] = matmul(R, C22) if q and r0 else Dp[:q, q:]
        D = layout.unpermute(Dp)
        start_opts = [None, {s: cons._zeros_like(C, 1, n)[0] for s in starts}]
        start_opts += [{s: _random_gaussian(rng, 1, n)[0] for s in starts} for _ in range(4)]
        for opt in start_opts:
            T = cons.assemble_t(layout, C, D, start_rows=opt, profile=profile)
            plan = _accept(layout, C, D, T, k, "miller_witness", profile)
            if plan is not None:
                return plan
    return None


def plan_random_search(layout: Layout, C, k, profile=DEFAULT_PROFILE, seed=0, retries=64):
    """Seeded random ``T`` with small Gaussian-integer entries; ``(plan, tries)``."""
    rng = random.Random(seed)
    exact = cons.is_exact_matrix(C)
    for attempt in range(1, retries + 1):
        T = _random_gaussian(rng, layout.n, layout.n)
        if not exact:
            T = cons.to_approx_matrix(T, profile)
        D = C - matmul(cons._j_like(layout, C), T)
        plan = _accept(layout, C, D, T, k, "random_search", profile)
        if plan is not None:
            return plan, attempt
    return None, retries


def construct(layout: Layout, C, k, profile=DEFAULT_PROFILE, seed=0, retries=64):
    """Run the constructions for ``r0 >= 2`` in order.

    Returns ``(plan, certificate, attempts)``: a verified plan, or a
    certificate of non-membership, or neither.
    """
    cert = miller_certificate(layout, C, k, profile)
    if cert is not None:
        return None, cert, 0
    n, r0 = layout.n, layout.r0
    dim_w, rank21 = cons.w_data(layout, C, profile)
    attempts = 0
    routes = []
    if dim_w == r0:
        routes.append(lambda: cons.plan_basis_completion(layout, C, k, profile))
    if dim_w == 0:
        routes.append(lambda: cons.plan_scalar_shift(layout, C, k, profile))
    if dim_w == rank21:
        routes.append(lambda: _verified(cons.plan_rank_criterion(layout, C, profile), k, profile))
    C21, C22 = _blocks(layout, C)
    if cons.is_zero_matrix(C21, profile):
        if is_kth_power(C22, k, profile)[0]:
            routes.append(lambda: cons.plan_block_triangular(layout, C, k, profile))
        routes.append(lambda: plan_miller_witness(layout, C, k, profile, seed=seed))
    for route in routes:
        attempts += 1
        plan = route()
        if plan is not None:
            return plan, None, attempts
    plan, tries = plan_random_search(layout, C, k, profile, seed=seed, retries=retries)
    return plan, None, attempts + tries


def _verified(plan, k, profile):
    return plan if cons._both_powers(plan, k, profile) else None


def solve_low_dim(layout: Layout, C, k, profile=DEFAULT_PROFILE, seed=0):
    """Constructions for ``n in {3, 4}``, ``r0 = 2`` (or more) and
    ``n > k(r0 - 1)``, where every target is in the image."""
    n, r0 = layout.n, layout.r0
    if n not in (3, 4) or r0 < 2 or n <= k * (r0 - 1):
        raise OutOfRegime(f"low-dimensional regime needs n in {{3, 4}}, r0 >= 2, n > k(r0-1); got n={n}, k={k}, r0={r0}")
    plan, cert, _ = construct(layout, C, k, profile, seed=seed)
    return plan
