"""Constructions that pick ``T`` so that both ``C - JT`` and ``T`` are k-th powers.

Everything here works in reduced coordinates ``J = J' (+) N`` (see
:class:`Layout`).  Writing ``D = C - JT``, the rows of ``D`` that are not the
last row of a zero block can be prescribed freely: the ``J'`` rows fix
``T[:n'] = J'^{-1}(C - D)[:n']`` and a non-final row ``i`` of a zero block
fixes ``T[i+1] = C[i] - D[i]``.  The last row of each zero block is stuck at
``D[ell] = C[ell]`` and the first row of each zero block of ``T`` is free.
Each construction chooses the free rows of ``D`` and the free rows of ``T``;
:func:`assemble_t` fills in the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..arithmetic import DEFAULT_PROFILE, ONE, ZERO, GaussianRational
from ..exceptions import InvariantViolation, PreconditionViolated
from ..linalg import (
    SpanTracker,
    char_poly,
    constrained_basis_completion,
    det,
    eye,
    inverse,
    is_exact_matrix,
    matmul,
    max_abs,
    norm_inf,
    rank,
    select_independent,
    solve_linear,
    to_approx_matrix,
    zeros,
)
from ..powers import is_kth_power
from .types import Layout

__all__ = [
    "Plan",
    "assemble_t",
    "shift_scalar",
    "plan_invertible",
    "choose_mu",
    "plan_full_nilpotent",
    "plan_one_nilpotent_block",
    "build_rank_criterion_t",
    "plan_rank_criterion",
    "plan_basis_completion",
    "plan_scalar_shift",
    "plan_block_triangular",
]


@dataclass(frozen=True, eq=False)
class Plan:
    """A pair ``D = C - JT`` and ``T`` that are both k-th powers."""

    D: np.ndarray
    T: np.ndarray
    route: str


# -- helpers -------------------------------------------------------------------


def _like(M, x):
    """Scalar ``x`` in the arithmetic of ``M``."""
    if is_exact_matrix(M):
        return x if isinstance(x, GaussianRational) else GaussianRational(x)
    z = next(iter(np.asarray(M).flat), None)
    return (z * 0 if z is not None else 0) + x


def _eye_like(M, n):
    return eye(n) if is_exact_matrix(M) else to_approx_matrix(eye(n))


def _zeros_like(M, n, m=None):
    return zeros(n, m) if is_exact_matrix(M) else to_approx_matrix(zeros(n, m))


def _j_like(layout, M):
    """``layout.J`` in the arithmetic of ``M``."""
    J = layout.J
    if is_exact_matrix(M) or not is_exact_matrix(J):
        return J
    return to_approx_matrix(J)


def _unit(M, n, j, scale=1):
    v = np.full(n, _like(M, 0), dtype=object)
    v[j] = _like(M, scale)
    return v


def _tol(M, profile):
    if is_exact_matrix(M):
        return None
    return profile.eps_rank * max(1, max_abs(M, profile))


def is_zero_matrix(M, profile=DEFAULT_PROFILE):
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return True
    tol = _tol(M, profile)
    if tol is None:
        return all(x == 0 for x in M.flat)
    return max_abs(M, profile) <= tol


def _nonzero_scalar(x, scale, profile):
    if isinstance(x, GaussianRational):
        return x != 0
    return abs(x) > profile.eps_rank * max(1, scale)


def shift_scalar(M, profile=DEFAULT_PROFILE):
    """``1 + ceil(||M||_inf)``: exceeds the spectral radius of ``M``."""
    if M.size == 0:
        return 1
    return 1 + int(profile.ctx.ceil(norm_inf(M, profile)))


def assemble_t(layout: Layout, C, D, start_rows=None, profile=DEFAULT_PROFILE):
    """The ``T`` with ``C - JT = D`` for prescribed free rows of ``D``.

    ``start_rows`` maps first-row indices of zero blocks to rows of ``T``;
    missing ones are filled with standard vectors outside the span of the
    rows fixed so far, which makes ``T`` invertible whenever the determined
    rows are independent.
    """
    n, d = layout.n, layout.nprime
    start_rows = dict(start_rows or {})
    R = C - D
    for ell in layout.ells:
        if not is_zero_matrix(R[ell : ell + 1], profile):
            raise InvariantViolation("D must agree with C on the last row of each zero block")
    T = _zeros_like(C, n)
    if d:
        T[:d] = solve_linear(layout.Jprime, R[:d], profile)
    for s, m in zip(layout.starts, layout.partition):
        for i in range(s, s + m - 1):
            T[i + 1] = R[i]
    span = SpanTracker(n, None if is_exact_matrix(T) else profile.eps_rank)
    fixed = [i for i in range(n) if i not in set(layout.starts)]
    for i in fixed:
        span.add(T[i])
    for s in layout.starts:
        if s in start_rows:
            T[s] = start_rows[s]
        else:
            for j in range(n):
                e = _unit(C, n, j)
                if not span.contains(e):
                    T[s] = e
                    break
        span.add(T[s])
    return T


def _check_plan(layout, C, plan, profile):
    resid = C - matmul(_j_like(layout, C), plan.T) - plan.D
    if not is_zero_matrix(resid, profile):
        raise InvariantViolation("assembled T does not reproduce D = C - JT")
    return plan


def _both_powers(plan, k, profile):
    return is_kth_power(plan.D, k, profile)[0] and is_kth_power(plan.T, k, profile)[0]


# -- invertible coefficient --------------------------------------------------------


def plan_invertible(B, C, profile=DEFAULT_PROFILE):
    """``X1^k = lambda I`` and ``X2^k = B^{-1}(C - lambda I)`` with
    ``lambda = 1 + ceil(||C||_inf)``, which is not an eigenvalue of ``C``."""
    n = C.shape[0]
    lam = shift_scalar(C, profile)
    D = _like(C, lam) * _eye_like(C, n)
    T = solve_linear(B, C - D, profile)
    return Plan(D=D, T=T, route="invertible")


# -- one nilpotent block -----------------------------------------------------------


def choose_mu(C11, Jprime, k, profile=DEFAULT_PROFILE):
    """First ``mu = lam**k`` (``lam = 1, 2, ...``) with ``det(C11 - mu J') != 0``.

    ``det(C11 - mu J')`` is a polynomial in ``mu`` whose leading coefficient
    is ``+-det(J') != 0``, so at most ``n'`` integers fail.
    """
    d = C11.shape[0]
    if d == 0:
        return _like(C11, 1)
    scale = max(1, max_abs(C11, profile)) + max(1, max_abs(Jprime, profile))
    for lam in range(1, d + 2):
        mu = _like(C11, lam**k)
        value = det(C11 - mu * Jprime, profile)
        if _nonzero_scalar(value, scale ** d * lam ** (k * d), profile):
            return mu
    raise InvariantViolation("no admissible mu among the first n'+1 candidates")


def plan_full_nilpotent(C, profile=DEFAULT_PROFILE):
    """Construction for ``J = J_{0,n}`` (a single nilpotent block).

    If the last row ``c_n`` is nonzero, a row basis containing ``c_n`` is kept
    in ``D``, the matching rows of ``T`` vanish and the remaining rows come
    from :func:`constrained_basis_completion`, so ``D`` is invertible and
    ``T`` (with first row ``e_1``) has a semisimple zero eigenvalue.  If
    ``c_n = 0``, ``T`` is ``lambda`` times a cyclic permutation and ``D`` has
    a single simple zero eigenvalue.
    """
    n = C.shape[0]
    layout = Layout(Jprime=_zeros_like(C, 0), partition=(n,))
    T = _zeros_like(C, n)
    if not is_zero_matrix(C[n - 1 : n], profile):
        rows = [C[i] for i in range(n)]
        basis = select_independent(rows, order=range(n - 1, -1, -1), profile=profile)
        if len(basis) == n:
            return _check_plan(layout, C, Plan(D=C.copy(), T=T, route="full_nilpotent_invertible"), profile)
        rest = sorted(set(range(n)) - set(basis))
        ts = constrained_basis_completion(
            [C[r] for r in sorted(basis)], [r + 1 for r in rest], n, profile
        )
        T[0] = _unit(C, n, 0)
        for r, t in zip(rest, ts):
            T[r + 1] = t
        route = "full_nilpotent_basis"
    else:
        lam = shift_scalar(C[: n - 1, : n - 1], profile)
        T[0] = _unit(C, n, n - 1)
        for i in range(1, n):
            T[i] = _unit(C, n, i - 1, lam)
        route = "full_nilpotent_shift"
    D = C - matmul(_j_like(layout, C), T)
    return Plan(D=D, T=T, route=route)


def plan_one_nilpotent_block(layout: Layout, C, k, profile=DEFAULT_PROFILE):
    """``T = [[mu I, Q], [0, T']]`` with ``Q = J'^{-1} C12`` and ``T'`` from
    the single-block construction on ``C22``; ``C - JT`` is block lower
    triangular with an invertible upper-left block."""
    if layout.r0 != 1 or layout.nprime == 0:
        raise PreconditionViolated("expected J' (+) J_{0,n0} with a nonempty J'")
    d, n = layout.nprime, layout.n
    Jp = layout.Jprime
    mu = choose_mu(C[:d, :d], Jp, k, profile)
    Q = solve_linear(Jp, C[:d, d:], profile)
    inner = plan_full_nilpotent(np.array(C[d:, d:], dtype=object), profile)
    T = _zeros_like(C, n)
    T[:d, :d] = mu * _eye_like(C, d)
    T[:d, d:] = Q
    T[d:, d:] = inner.T
    D = C - matmul(_j_like(layout, C), T)
    return Plan(D=D, T=T, route="one_nilpotent_block")


# -- several nilpotent blocks ------------------------------------------------------


def w_data(layout: Layout, C, profile=DEFAULT_PROFILE):
    """``(dim W, rank C21^P)`` where ``W`` is spanned by the last rows of the
    zero blocks."""
    ells, free = list(layout.ells), list(layout.free)
    W = np.array(C[ells], dtype=object)
    dim_w = rank(W, profile) if W.size else 0
    C21 = np.array(C[np.ix_(ells, free)], dtype=object)
    rank21 = rank(C21, profile) if C21.size else 0
    return dim_w, rank21


def _standard_completion(M, vectors, count, coords, profile):
    """``count`` standard vectors ``e_j`` (``j`` in ``coords``) completing the
    span of ``vectors``."""
    n = len(coords)
    span = SpanTracker(n, None if is_exact_matrix(M) else profile.eps_rank)
    for v in vectors:
        span.add(v)
    out = []
    for j in range(n):
        if len(out) == count:
            break
        e = _unit(M, n, j)
        if span.add(e):
            out.append(j)
    if len(out) != count:
        raise InvariantViolation("standard completion ran out of vectors")
    return out


def build_rank_criterion_t(layout: Layout, C, profile=DEFAULT_PROFILE, max_scale=None):
    """``T`` invertible with ``a_{r0-m}(C - JT) != 0`` when ``rank C21^P = dim W = m``.

    In ``P``-coordinates the free rows of ``D`` are
    ``c_{j_i} + i s e_{j_i}`` for ``m`` bottom rows ``j_i`` with independent
    leading parts, and ``s b`` for standard vectors ``b`` completing those
    leading parts to a basis.  For large ``s`` the principal minor on the
    leading block plus ``{j_i}`` dominates ``a_{r0-m}``, and the determined
    rows of ``T`` are independent; both are polynomial conditions in ``s`` of
    degree ``n - r0``, so the sweep ``s = 1, 2, ...`` stops within
    ``2(n - r0) + 1`` steps.  Returns ``(T, D)``.
    """
    n, r0 = layout.n, layout.r0
    q = n - r0
    dim_w, rank21 = w_data(layout, C, profile)
    if dim_w != rank21:
        raise PreconditionViolated(
            f"rank criterion needs rank(C21^P) = dim W, got {rank21} != {dim_w}"
        )
    m = dim_w
    Cp = layout.permute(C)
    lead = [Cp[j, :q] for j in range(q, n)]
    chosen = [q + i for i in select_independent(lead, profile=profile)][:m]
    comp = _standard_completion(C, [Cp[j, :q] for j in chosen], q - m, range(q), profile)
    max_scale = max_scale or 2 * q + 2
    for s in range(1, max_scale + 1):
        Dp = _zeros_like(C, n)
        Dp[q:] = Cp[q:]
        for i, j in enumerate(chosen):
            Dp[i] = Cp[j] + _unit(C, n, j, (i + 1) * s)
        for i, j in enumerate(comp):
            Dp[m + i] = _unit(C, n, j, s)
        D = layout.unpermute(Dp)
        coeff = char_poly(D, profile)[r0 - m]
        if not _nonzero_scalar(coeff, max_abs(D, profile) ** (q + m), profile):
            continue
        T = assemble_t(layout, C, D, profile=profile)
        if rank(T, profile) == n:
            return T, D
    raise InvariantViolation("rank-criterion sweep exhausted its bound")


def plan_rank_criterion(layout: Layout, C, profile=DEFAULT_PROFILE):
    T, D = build_rank_criterion_t(layout, C, profile)
    return _check_plan(layout, C, Plan(D=D, T=T, route="rank_criterion"), profile)


def _sweep_free_rows(layout, C, make_rows, route, k, profile, scales=None):
    """Try ``D`` with free rows ``make_rows(s)`` for ``s = 1, 2, ...`` until
    ``T`` comes out invertible and both factors are k-th powers."""
    n = layout.n
    scales = scales or range(1, 2 * n + 3)
    for s in scales:
        D = C.copy()
        for f, row in make_rows(s).items():
            D[f] = row
        T = assemble_t(layout, C, D, profile=profile)
        if rank(T, profile) < n:
            continue
        plan = Plan(D=D, T=T, route=route)
        if _both_powers(plan, k, profile):
            return _check_plan(layout, C, plan, profile)
    return None


def plan_basis_completion(layout: Layout, C, k, profile=DEFAULT_PROFILE):
    """``dim W = r0``: free rows ``s b`` with standard ``b`` completing a basis
    of ``W``, so ``D`` is invertible; ``s`` sweeps until ``T`` is invertible."""
    n = layout.n
    ells = list(layout.ells)
    if rank(np.array(C[ells], dtype=object), profile) != layout.r0:
        raise PreconditionViolated("basis completion needs dim W = r0")
    comp = _standard_completion(C, [C[e] for e in ells], n - layout.r0, range(n), profile)
    free = list(layout.free)
    return _sweep_free_rows(
        layout,
        C,
        lambda s: {f: _unit(C, n, j, s) for f, j in zip(free, comp)},
        "basis_completion",
        k,
        profile,
    )


def plan_scalar_shift(layout: Layout, C, k, profile=DEFAULT_PROFILE):
    """``dim W = 0``: ``D = C - nu * (identity on free rows)`` and ``T`` is
    ``nu`` times ``J'^{-1}`` (+) cyclic shifts, with ``nu = 1 + ceil(||C||)``
    not an eigenvalue of the leading block of ``C^P``."""
    n = layout.n
    ells = list(layout.ells)
    if not is_zero_matrix(np.array(C[ells], dtype=object), profile):
        raise PreconditionViolated("scalar shift needs dim W = 0")
    nu = shift_scalar(C, profile)
    D = C.copy()
    for f in layout.free:
        D[f] = C[f] - _unit(C, n, f, nu)
    starts = {s: _unit(C, n, s + m - 1, nu) for s, m in zip(layout.starts, layout.partition)}
    T = assemble_t(layout, C, D, start_rows=starts, profile=profile)
    plan = Plan(D=D, T=T, route="scalar_shift")
    if not _both_powers(plan, k, profile):
        raise InvariantViolation("scalar shift produced a non-power")
    return _check_plan(layout, C, plan, profile)


def plan_block_triangular(layout: Layout, C, k, profile=DEFAULT_PROFILE):
    """``C21^P = 0`` and ``C22^P`` a k-th power: free rows ``s e_f`` make
    ``D^P = sI (+) C22^P``."""
    n = layout.n
    ells, free = list(layout.ells), list(layout.free)
    if not is_zero_matrix(np.array(C[np.ix_(ells, free)], dtype=object), profile):
        raise PreconditionViolated("block-triangular route needs C21^P = 0")
    if not is_kth_power(np.array(C[np.ix_(ells, ells)], dtype=object), k, profile)[0]:
        raise PreconditionViolated("block-triangular route needs C22^P to be a k-th power")
    return _sweep_free_rows(
        layout,
        C,
        lambda s: {f: _unit(C, n, f, s) for f in free},
        "block_triangular",
        k,
        profile,
    )
