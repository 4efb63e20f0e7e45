"""Seeded instance generators and the acceptance checks.

Each ``check_*`` function runs one acceptance criterion and returns a
:class:`CriterionResult`; ``run_all`` runs them in order.  The same
functions back ``tests/test_acceptance.py`` and ``matwaring selftest``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from .arithmetic import DEFAULT_PROFILE, GaussianRational
from .decomposer import (
    IN_IMAGE,
    NOT_IN_IMAGE,
    SOLVED,
    make_instance,
    membership_n3,
    non_surjectivity_witness,
    reduce,
    solve,
    verdict,
)
from .jordan import jordan_form, jordan_matrix
from .linalg import eye, inverse, mat_pow, matmul, max_abs, norm_inf, rank, to_approx_matrix
from .powers import is_kth_power, matrix_kth_root, miller_power

__all__ = [
    "CriterionResult",
    "random_scalar",
    "random_matrix",
    "random_invertible",
    "conjugate",
    "random_structure",
    "VERDICTS_N3",
    "VERDICTS_N4",
    "CHECKS",
    "run_all",
]

ZERO = GaussianRational(0)
BOUND = DEFAULT_PROFILE.eps_residual

# verdicts read off the classification tables; k >= 3 (n = 3) and k >= 4
# (n = 4) columns are repeated for every k up to 5
S, N = "surjective", "not_surjective"
VERDICTS_N3 = {
    0: {2: S, 3: S, 4: S, 5: S},
    1: {2: S, 3: S, 4: S, 5: S},
    2: {2: S, 3: N, 4: N, 5: N},
}
VERDICTS_N4 = {
    0: {2: S, 3: S, 4: S, 5: S},
    1: {2: S, 3: S, 4: S, 5: S},
    2: {2: S, 3: S, 4: N, 5: N},
    3: {2: N, 3: N, 4: N, 5: N},
}


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} {self.name}: {self.detail} ({self.seconds:.1f}s, limit {self.limit:g}s)"


# -- generators --------------------------------------------------------------------


def random_scalar(rng, bound=10, complex_=True):
    """Gaussian rational with numerators in ``[-bound, bound]`` and
    denominators in ``[1, bound]``."""
    re = GaussianRational(rng.randint(-bound, bound)) / rng.randint(1, bound)
    im = GaussianRational(rng.randint(-bound, bound)) / rng.randint(1, bound) if complex_ else ZERO
    return re + im * GaussianRational(0, 1)


def random_matrix(rng, n, bound=10, integer=False):
    if integer:
        return np.array(
            [[GaussianRational(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)],
            dtype=object,
        )
    return np.array([[random_scalar(rng, bound) for _ in range(n)] for _ in range(n)], dtype=object)


def random_invertible(rng, n, bound=10, integer=False):
    while True:
        M = random_matrix(rng, n, bound, integer)
        if rank(M) == n:
            return M


def conjugate(rng, J, bound=3):
    """``g J g^{-1}`` for a random invertible ``g`` with small entries."""
    g = random_invertible(rng, J.shape[0], bound, integer=True)
    return matmul(matmul(g, J), inverse(g))


def _compose(rng, total, parts):
    """Random composition of ``total`` into ``parts`` positive integers."""
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    return [b - a for a, b in zip([0] + cuts, cuts + [total])]


def random_structure(rng, n, r0, eigenvalues=(-3, -2, -1, 1, 2, 3)):
    """Jordan blocks of total size ``n`` with exactly ``r0`` zero blocks,
    nonzero blocks first and zero blocks in decreasing size."""
    n0 = rng.randint(r0, n) if r0 else 0
    zero = sorted(_compose(rng, n0, r0), reverse=True) if r0 else []
    rest = n - n0
    sizes = _compose(rng, rest, rng.randint(1, rest)) if rest else []
    blocks = [(GaussianRational(rng.choice(eigenvalues)), m) for m in sizes]
    return blocks + [(ZERO, m) for m in zero]


def instance_with_structure(rng, blocks, k, C=None):
    J = jordan_matrix(blocks)
    n = J.shape[0]
    A1 = random_invertible(rng, n)
    A2 = matmul(A1, conjugate(rng, J))
    return make_instance(A1, A2, k, C)


def crafted_target(rng, red, mode):
    """A target whose reduced form hits a chosen subcase.

    ``mode``: ``random``, ``c21_zero`` (``C21^P = 0``), ``c22_nilpotent``
    (``C21^P = 0`` and ``C22^P`` a nonzero nilpotent), ``w0`` (last rows of
    the zero blocks vanish, ``dim W = 0``), ``w1`` (those rows span a line).
    """
    layout = red.layout
    n = layout.n
    Ct = random_matrix(rng, n, 5)
    e, f = list(layout.ells), list(layout.free)
    if mode in ("c21_zero", "c22_nilpotent"):
        Ct[np.ix_(e, f)] = ZERO
    if mode == "c22_nilpotent":
        N = jordan_matrix([(ZERO, 2)] + [(ZERO, 1)] * (len(e) - 2))
        Ct[np.ix_(e, e)] = conjugate(rng, N)
    if mode == "w0":
        Ct[e] = ZERO
    if mode == "w1":
        u = Ct[e[-1]].copy()
        for x in e[:-1]:
            Ct[x] = u * rng.randint(-2, 2)
    inst = red.instance
    return matmul(inst.A1, matmul(matmul(red.g_inv, Ct), red.g))


def _solved(r, bound=BOUND):
    return r.tag == SOLVED and r.residual <= bound


def _timed(name, limit, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    elapsed = time.perf_counter() - t0
    if elapsed > limit:
        passed = False
        detail += f"; exceeded time limit {limit:g}s"
    return CriterionResult(name, passed, detail, elapsed, limit)


# -- criteria ----------------------------------------------------------------------


def check_n3_verdict_grid(seed=0):
    def run():
        bad = [
            (r0, k)
            for r0, row in VERDICTS_N3.items()
            for k, want in row.items()
            if verdict(3, k, r0).tag != want
        ]
        return not bad, f"12 cells, mismatches {bad}"

    return _timed("n3_verdict_grid", 1.0, run)


def check_n4_verdict_grid(seed=0):
    def run():
        bad = [
            (r0, k)
            for r0, row in VERDICTS_N4.items()
            for k, want in row.items()
            if verdict(4, k, r0).tag != want
        ]
        return not bad, f"16 cells, mismatches {bad}"

    return _timed("n4_verdict_grid", 1.0, run)


def _int_rank(rows):
    """Rank of an integer matrix by fraction-free elimination."""
    M = [list(r) for r in rows]
    rk, cols = 0, len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(rk, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        for i in range(rk + 1, len(M)):
            a, b = M[rk][c], M[i][c]
            M[i] = [a * x - b * y for x, y in zip(M[i], M[rk])]
        rk += 1
    return rk


def _oracle_partition(n, k):
    N = np.eye(n, k=1, dtype=np.int64)
    Nk = np.linalg.matrix_power(N, k)
    P = np.eye(n, dtype=np.int64)
    nullities = [0]
    for _ in range(n):
        P = P.dot(Nk)
        nullities.append(n - _int_rank(P.tolist()))
        if nullities[-1] == n:
            break
    at_least = [nullities[j] - nullities[j - 1] for j in range(1, len(nullities))] + [0]
    parts = []
    for j in range(1, len(at_least)):
        parts += [j] * (at_least[j - 1] - at_least[j])
    return tuple(sorted(parts, reverse=True))


def check_miller_oracle(seed=0):
    def run():
        bad = [
            (n, k)
            for k in range(2, 7)
            for n in range(1, 13)
            if tuple(miller_power(n, k)) != _oracle_partition(n, k)
        ]
        return not bad, f"55 (n, k) pairs, mismatches {bad}"

    return _timed("miller_oracle", 5.0, run)


def check_r0_at_most_one(seed=0, count=200):
    def run():
        rng = random.Random(seed)
        failures, worst = [], 0
        for t in range(count):
            n = rng.randint(1, 5)
            k = rng.choice((2, 3, 4))
            r0 = rng.randint(0, 1)
            inst = instance_with_structure(rng, random_structure(rng, n, r0), k)
            inst = make_instance(inst.A1, inst.A2, k, random_matrix(rng, n))
            r = solve(inst)
            if not _solved(r):
                failures.append((t, n, k, r0, r.tag))
            else:
                worst = max(worst, r.residual)
        return not failures, f"{count} instances, failures {failures[:5]}, worst residual {float(worst):.2e}"

    return _timed("constructive_r0_at_most_one", 60.0, run)


N3_STRUCTURES = ([(ZERO, 2), (ZERO, 1)], [(GaussianRational(2), 1), (ZERO, 1), (ZERO, 1)])
SUBCASES = ("c21_zero", "c22_nilpotent", "w0", "w1")


def check_n3_k2(seed=0, count=100):
    def run():
        rng = random.Random(seed)
        failures, total = [], 0
        for t in range(count + 4 * len(SUBCASES)):
            blocks = N3_STRUCTURES[t % 2]
            inst = instance_with_structure(rng, blocks, 2)
            red = reduce(inst)
            mode = "random" if t < count else SUBCASES[(t - count) // 2 % len(SUBCASES)]
            C = crafted_target(rng, red, mode)
            r = solve(make_instance(inst.A1, inst.A2, 2, C))
            total += 1
            if not _solved(r):
                failures.append((t, mode, r.tag))
        return not failures, f"{total} targets ({count} random + crafted), failures {failures[:5]}"

    return _timed("n3_k2_r0_2_surjective", 30.0, run)


def check_n3_nonsurjective(seed=0, count=200, trials=100):
    def run():
        rng = random.Random(seed)
        counts = {IN_IMAGE: 0, NOT_IN_IMAGE: 0}
        failures = []
        e23 = np.full((3, 3), ZERO, dtype=object)
        e23[1, 2] = GaussianRational(1)
        for t in range(count + 1):
            k = 3 + t % 3
            blocks = N3_STRUCTURES[t % 2] if t < count else N3_STRUCTURES[0]
            J = jordan_matrix(blocks)
            A2 = conjugate(rng, J) if t < count else J
            inst = make_instance(eye(3), A2, k)
            red = reduce(inst)
            if t == count:
                C = e23
            else:
                mode = ("random", "c22_nilpotent", "c21_zero")[t % 3]
                C = crafted_target(rng, red, mode)
            inst = make_instance(inst.A1, A2, k, C)
            red = reduce(inst)
            status = membership_n3(red.layout, red.Ctilde, k)
            status = NOT_IN_IMAGE if status != IN_IMAGE else IN_IMAGE
            counts[status] += 1
            if status == NOT_IN_IMAGE:
                for _ in range(trials):
                    T = random_matrix(rng, 3, 5, integer=True)
                    if is_kth_power(red.Ctilde - matmul(red.J, T), k)[0]:
                        failures.append((t, "random T gave a k-th power"))
                        break
            else:
                r = solve(inst)
                if not _solved(r):
                    failures.append((t, r.tag))
        return not failures, f"{counts[IN_IMAGE]} in image, {counts[NOT_IN_IMAGE]} excluded (incl. E23), failures {failures[:5]}"

    return _timed("n3_k_ge_3_r0_2_membership", 120.0, run)


N4_STRUCTURES = {
    0: ([(GaussianRational(1), 2), (GaussianRational(-2), 2)], [(GaussianRational(3), 1), (GaussianRational(-1), 3)]),
    1: ([(ZERO, 4)], [(GaussianRational(2), 1), (ZERO, 3)], [(GaussianRational(1), 2), (ZERO, 2)]),
    2: (
        [(ZERO, 3), (ZERO, 1)],
        [(ZERO, 2), (ZERO, 2)],
        [(GaussianRational(1), 1), (ZERO, 2), (ZERO, 1)],
        [(GaussianRational(1), 1), (GaussianRational(2), 1), (ZERO, 1), (ZERO, 1)],
        [(GaussianRational(-1), 2), (ZERO, 1), (ZERO, 1)],
    ),
    3: ([(ZERO, 2), (ZERO, 1), (ZERO, 1)], [(GaussianRational(3), 1), (ZERO, 1), (ZERO, 1), (ZERO, 1)]),
}


def check_n4_cells(seed=0, count=100, trials=100):
    def run():
        rng = random.Random(seed)
        failures, solved, witnesses = [], 0, 0
        for r0, row in VERDICTS_N4.items():
            for k, tag in row.items():
                structures = N4_STRUCTURES[r0]
                if tag == S:
                    for t in range(count):
                        blocks = structures[t % len(structures)]
                        inst = instance_with_structure(rng, blocks, k)
                        modes = ("random",) + SUBCASES if r0 >= 2 else ("random",)
                        mode = modes[t % len(modes)]
                        C = crafted_target(rng, reduce(inst), mode) if r0 >= 2 else random_matrix(rng, 4)
                        r = solve(make_instance(inst.A1, inst.A2, k, C))
                        solved += _solved(r)
                        if not _solved(r):
                            failures.append((r0, k, blocks, mode, r.tag))
                else:
                    for blocks in structures:
                        J = jordan_matrix(blocks)
                        C, checker = non_surjectivity_witness(J, k)
                        witnesses += 1
                        for _ in range(trials):
                            if not checker(random_matrix(rng, 4, 5, integer=True)):
                                failures.append((r0, k, blocks, "witness failed"))
                                break
        return not failures, f"{solved} solved targets, {witnesses} witnesses checked, failures {failures[:5]}"

    return _timed("n4_cells", 120.0, run)


def check_root_roundtrip(seed=0, count=200):
    def run():
        rng = random.Random(seed)
        worst, failures = 0, []
        for t in range(count):
            n, k = rng.randint(1, 6), rng.randint(2, 5)
            M = random_invertible(rng, n)
            X = matrix_kth_root(M, k)
            res = norm_inf(mat_pow(X, k) - to_approx_matrix(M))
            worst = max(worst, res)
            if res > BOUND:
                failures.append((t, n, k))
        return not failures, f"{count} matrices, worst residual {float(worst):.2e}, failures {failures[:5]}"

    return _timed("kth_root_roundtrip", 30.0, run)


def _canonical(blocks):
    nonzero = sorted(
        ((lam, m) for lam, m in blocks if lam != 0),
        key=lambda b: (-abs(complex(b[0])), np.angle(complex(b[0])), -b[1]),
    )
    return tuple(nonzero) + tuple(sorted(((lam, m) for lam, m in blocks if lam == 0), key=lambda b: -b[1]))


def check_jordan_roundtrip(seed=0, count=100):
    def run():
        rng = random.Random(seed)
        failures, worst = [], 0
        for t in range(count):
            n = rng.randint(1, 6)
            blocks, left = [], n
            while left:
                m = rng.randint(1, left)
                blocks.append((GaussianRational(rng.randint(-3, 3)), m))
                left -= m
            g = random_invertible(rng, n, 5)
            B = matmul(matmul(g, jordan_matrix(blocks)), inverse(g))
            d = jordan_form(B)
            res = max_abs(matmul(matmul(d.P, d.J), inverse(d.P)) - B)
            worst = max(worst, res)
            if _canonical(blocks) != tuple(d.structure.blocks) or res > BOUND:
                failures.append((t, blocks))
        return not failures, f"{count} planted forms, worst residual {float(worst):.2e}, failures {failures[:3]}"

    return _timed("jordan_roundtrip", 30.0, run)


def check_equivariance(seed=0, count=50):
    def run():
        rng = random.Random(seed)
        mismatches, tags = [], {}
        for t in range(count):
            n = rng.choice((3, 3, 4))
            r0 = rng.randint(0, 2 if n == 3 else 3)
            k = rng.choice((2, 3))
            blocks = random_structure(rng, n, r0)
            inst = instance_with_structure(rng, blocks, k)
            mode = ("random", "c22_nilpotent", "c21_zero")[t % 3] if r0 >= 2 else "random"
            C = crafted_target(rng, reduce(inst), mode)
            g = random_invertible(rng, n, 3, integer=True)
            gi = inverse(g)
            a = solve(make_instance(inst.A1, inst.A2, k, C))
            b = solve(
                make_instance(
                    matmul(matmul(g, inst.A1), gi),
                    matmul(matmul(g, inst.A2), gi),
                    k,
                    matmul(matmul(g, C), gi),
                )
            )
            tags[a.tag] = tags.get(a.tag, 0) + 1
            if (a.tag == SOLVED) != (b.tag == SOLVED) or (a.tag == NOT_IN_IMAGE) != (b.tag == NOT_IN_IMAGE):
                mismatches.append((t, a.tag, b.tag))
            for r in (a, b):
                if r.tag == SOLVED and r.residual > BOUND:
                    mismatches.append((t, "residual"))
        return not mismatches, f"{count} trials, statuses {tags}, mismatches {mismatches[:5]}"

    return _timed("conjugation_equivariance", 60.0, run)


CHECKS = (
    check_n3_verdict_grid,
    check_n4_verdict_grid,
    check_miller_oracle,
    check_r0_at_most_one,
    check_n3_k2,
    check_n3_nonsurjective,
    check_n4_cells,
    check_root_roundtrip,
    check_jordan_roundtrip,
    check_equivariance,
)


def run_all(seed=0, out=None):
    results = []
    for check in CHECKS:
        res = check(seed=seed)
        results.append(res)
        if out is not None:
            print(res.line(), file=out, flush=True)
    return results
