"""Dense matrix kernel over exact Gaussian rationals or mpmath complexes.

Matrices are square ``numpy`` arrays of ``dtype=object``.  A matrix is
*exact* when every entry is a :class:`GaussianRational`; otherwise all
entries are ``mpc`` values of one profile context.  Every routine works on
both kinds: exact matrices get exact answers, approximate ones use the
thresholds of the supplied :class:`ToleranceProfile`.

Row vectors are 1-d object arrays; row and column indices are 0-based.
"""

from __future__ import annotations

import numpy as np

from .arithmetic import (
    DEFAULT_PROFILE,
    ONE,
    ZERO,
    GaussianRational,
    as_scalar,
    is_approx,
    to_approx,
)
from .exceptions import (
    DimensionMismatch,
    IllConditioned,
    IndexOutOfRange,
    InvariantViolation,
    Singular,
)

__all__ = [
    "asmat",
    "asvec",
    "eye",
    "zeros",
    "is_exact_matrix",
    "to_approx_matrix",
    "matmul",
    "mat_pow",
    "norm_inf",
    "max_abs",
    "rank",
    "nullity",
    "nullspace",
    "rref",
    "det",
    "inverse",
    "solve_linear",
    "char_poly",
    "shift_submatrix",
    "constrained_basis_completion",
    "SpanTracker",
    "select_independent",
]


# -- construction ------------------------------------------------------------


def asmat(M, profile=DEFAULT_PROFILE, square=True):
    """Coerce nested sequences or arrays to an object matrix.

    Exact inputs stay exact.  If any entry is an ``mpc``/``mpf`` the whole
    matrix is rounded to the profile's precision.
    """
    if isinstance(M, np.ndarray) and M.dtype == object and M.ndim == 2:
        arr = M
    else:
        try:
            arr = np.array(M, dtype=object)
        except ValueError as exc:
            raise DimensionMismatch(f"ragged matrix: {exc}") from None
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got {arr.ndim} dimensions")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    approx = False
    for idx, x in np.ndenumerate(arr):
        v = as_scalar(x)
        approx = approx or not isinstance(v, GaussianRational)
        out[idx] = v
    if approx:
        out = to_approx_matrix(out, profile)
    return out


def asvec(v, profile=DEFAULT_PROFILE):
    arr = asmat(np.asarray(v, dtype=object).reshape(1, -1), profile, square=False)
    return arr[0]


def eye(n):
    M = np.full((n, n), ZERO, dtype=object)
    for i in range(n):
        M[i, i] = ONE
    return M


def zeros(n, m=None):
    return np.full((n, n if m is None else m), ZERO, dtype=object)


def is_exact_matrix(M) -> bool:
    return all(isinstance(x, GaussianRational) for x in np.asarray(M).flat)


def to_approx_matrix(M, profile=DEFAULT_PROFILE, ctx=None):
    M = np.asarray(M, dtype=object)
    out = np.empty(M.shape, dtype=object)
    for idx, x in np.ndenumerate(M):
        out[idx] = to_approx(x, profile, ctx)
    return out


def _zero_like(M):
    for x in np.asarray(M).flat:
        return x * 0
    return ZERO


def matmul(A, B):
    """Matrix product that keeps object entries even for empty inner dimension."""
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    if A.shape[1] == 0:
        z = _zero_like(A) if A.size else _zero_like(B)
        return np.full((A.shape[0], B.shape[1]), z, dtype=object)
    return A.dot(B)


def mat_pow(M, k):
    M = np.asarray(M, dtype=object)
    result = None
    base = M
    while k:
        if k & 1:
            result = base if result is None else matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    if result is None:
        z = _zero_like(M)
        result = np.full(M.shape, z, dtype=object)
        for i in range(M.shape[0]):
            result[i, i] = z + 1
    return result


def _mag(x):
    """Comparable magnitude: exact squared modulus or approximate modulus."""
    if isinstance(x, GaussianRational):
        return x.norm2()
    return abs(x)


def _is_zero(x, tol):
    if tol is None:
        return x == 0
    return abs(x) <= tol


def max_abs(M, profile=DEFAULT_PROFILE):
    """Entrywise max-norm as an mpf of the profile context."""
    ctx = profile.ctx
    best = ctx.mpf(0)
    for x in np.asarray(M).flat:
        a = abs(to_approx(x, profile)) if not is_approx(x) else abs(ctx.mpc(x))
        if a > best:
            best = a
    return best


def norm_inf(M, profile=DEFAULT_PROFILE):
    """Maximum absolute row sum, evaluated at the profile's precision."""
    ctx = profile.ctx
    M = np.asarray(M, dtype=object)
    best = ctx.mpf(0)
    for row in M:
        s = ctx.fsum(abs(to_approx(x, profile)) for x in row)
        if s > best:
            best = s
    return best


def _tolerance(M, profile):
    """``None`` for exact matrices, else ``eps_rank`` times the max-norm."""
    if is_exact_matrix(M):
        return None
    return profile.eps_rank * max_abs(M, profile)


# -- elimination ---------------------------------------------------------------


def rank(M, profile=DEFAULT_PROFILE) -> int:
    """Rank by Gaussian elimination with complete (largest-magnitude) pivoting.

    For approximate matrices a pivot counts as zero below
    ``eps_rank * max|M_ij|``; accepted pivots within a factor 8 of that
    threshold raise :class:`IllConditioned`.
    """
    A = np.array(M, dtype=object, copy=True)
    if A.ndim != 2:
        raise DimensionMismatch("rank expects a 2-d array")
    rows, cols = A.shape
    exact = is_exact_matrix(A)
    if not exact:
        A = to_approx_matrix(A, profile)
        scale = max_abs(A, profile)
        tol = profile.eps_rank * scale
    r = 0
    while r < min(rows, cols):
        best, bi, bj = None, -1, -1
        for j in range(r, cols):
            for i in range(r, rows):
                m = _mag(A[i, j])
                if best is None or m > best or (m == best and i < bi):
                    best, bi, bj = m, i, j
        if exact and best == 0:
            break
        if not exact:
            if best <= tol:
                break
            if best < 8 * tol:
                raise IllConditioned(
                    "pivot within a factor 8 of eps_rank; raise precision"
                )
        A[[r, bi]] = A[[bi, r]]
        A[:, [r, bj]] = A[:, [bj, r]]
        piv = A[r, r]
        for i in range(r + 1, rows):
            if A[i, r] != 0:
                f = A[i, r] / piv
                A[i, r:] = A[i, r:] - f * A[r, r:]
        r += 1
    return r


def nullity(M, profile=DEFAULT_PROFILE) -> int:
    return np.asarray(M).shape[1] - rank(M, profile)


def rref(M, profile=DEFAULT_PROFILE, tol=None):
    """Reduced row echelon form with partial pivoting (largest magnitude in
    the column, ties to the lowest row).  Returns ``(R, pivot_columns)``."""
    A = np.array(M, dtype=object, copy=True)
    if tol is None:
        tol = _tolerance(A, profile)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        best, bi = None, -1
        for i in range(r, rows):
            m = _mag(A[i, c])
            if best is None or m > best:
                best, bi = m, i
        if _is_zero(A[bi, c], tol):
            for i in range(r, rows):
                A[i, c] = A[i, c] * 0
            continue
        A[[r, bi]] = A[[bi, r]]
        A[r, :] = A[r, :] / A[r, c]
        for i in range(rows):
            if i != r and A[i, c] != 0:
                A[i, :] = A[i, :] - A[i, c] * A[r, :]
        pivots.append(c)
        r += 1
    return A, pivots


def nullspace(M, profile=DEFAULT_PROFILE):
    """Basis of the right kernel ``{x : M x = 0}`` as a list of vectors."""
    M = np.asarray(M, dtype=object)
    R, piv = rref(M, profile)
    cols = M.shape[1]
    zero = _zero_like(M)
    basis = []
    for f in (c for c in range(cols) if c not in piv):
        v = np.full(cols, zero, dtype=object)
        v[f] = zero + 1
        for r, p in enumerate(piv):
            v[p] = -R[r, f]
        basis.append(v)
    return basis


def det(M, profile=DEFAULT_PROFILE):
    A = np.array(M, dtype=object, copy=True)
    n = A.shape[0]
    d = _zero_like(A) + 1
    for c in range(n):
        bi = max(range(c, n), key=lambda i: (_mag(A[i, c]), -i))
        if A[bi, c] == 0:
            return d * 0
        if bi != c:
            A[[c, bi]] = A[[bi, c]]
            d = -d
        piv = A[c, c]
        d = d * piv
        for i in range(c + 1, n):
            if A[i, c] != 0:
                f = A[i, c] / piv
                A[i, c:] = A[i, c:] - f * A[c, c:]
    return d


def inverse(M, profile=DEFAULT_PROFILE):
    """Gauss-Jordan inverse; raises :class:`Singular` when rank < n."""
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    exact = is_exact_matrix(M)
    ident = eye(n) if exact else to_approx_matrix(eye(n), profile)
    tol = _tolerance(M, profile)
    R, piv = rref(np.hstack([M, ident]), profile, tol=tol)
    if [p for p in piv if p < n] != list(range(n)):
        raise Singular("matrix is singular")
    inv = R[:, n:]
    if not exact:
        resid = max_abs(matmul(M, inv) - ident, profile)
        if resid > profile.eps_residual * max(1, norm_inf(M, profile) * norm_inf(inv, profile)):
            raise IllConditioned("inverse residual exceeds eps_residual")
    return np.array(inv, dtype=object)


def solve_linear(M, b, profile=DEFAULT_PROFILE):
    """Solve ``M x = b`` for square invertible ``M``; ``b`` may be a vector or matrix."""
    M = np.asarray(M, dtype=object)
    b = np.asarray(b, dtype=object)
    vec = b.ndim == 1
    rhs = b.reshape(-1, 1) if vec else b
    n = M.shape[0]
    R, piv = rref(np.hstack([M, rhs]), profile, tol=_tolerance(M, profile))
    if [p for p in piv if p < n] != list(range(n)):
        raise Singular("matrix is singular")
    x = R[:, n:]
    return x[:, 0] if vec else x


# -- characteristic polynomial ---------------------------------------------------


def _berkowitz(A):
    """Division-free characteristic polynomial, coefficients high to low."""
    n = A.shape[0]
    one = _zero_like(A) + 1
    poly = [one, -A[0, 0]]
    for r in range(1, n):
        Ar = A[:r, :r]
        R = A[r, :r]
        S = A[:r, r]
        col = [one, -A[r, r]]
        v = S
        for _ in range(r):
            col.append(-R.dot(v))
            v = Ar.dot(v)
        new = []
        for i in range(r + 2):
            acc = one * 0
            for j in range(min(i, r) + 1):
                if i - j < len(col):
                    acc = acc + col[i - j] * poly[j]
            new.append(acc)
        poly = new
    return poly


def _hessenberg(A):
    """Similarity to upper Hessenberg form by pivoted Gaussian elimination."""
    H = np.array(A, dtype=object, copy=True)
    n = H.shape[0]
    for j in range(n - 2):
        p = max(range(j + 1, n), key=lambda i: (_mag(H[i, j]), -i))
        if H[p, j] == 0:
            continue
        if p != j + 1:
            H[[p, j + 1]] = H[[j + 1, p]]
            H[:, [p, j + 1]] = H[:, [j + 1, p]]
        piv = H[j + 1, j]
        for i in range(j + 2, n):
            if H[i, j] != 0:
                m = H[i, j] / piv
                H[i, :] = H[i, :] - m * H[j + 1, :]
                H[:, j + 1] = H[:, j + 1] + m * H[:, i]
    return H


def _hessenberg_charpoly(H):
    """Low-to-high coefficients of det(zI - H) for upper Hessenberg ``H``."""
    n = H.shape[0]
    one = _zero_like(H) + 1
    polys = [[one]]
    for j in range(n):
        prev = polys[-1]
        cur = [one * 0] + prev
        for i, c in enumerate(prev):
            cur[i] = cur[i] - H[j, j] * c
        prod = one
        for i in range(j - 1, -1, -1):
            prod = prod * H[i + 1, i]
            coef = H[i, j] * prod
            for d, c in enumerate(polys[i]):
                cur[d] = cur[d] - coef * c
        polys.append(cur)
    return polys[-1]


def char_poly(M, profile=DEFAULT_PROFILE):
    """Coefficients of ``det(zI - M)`` from ``z**0`` up to the leading ``1``.

    The returned list has ``n + 1`` entries; entry ``i`` equals
    ``(-1)**(n-i)`` times the sum of the principal minors of size ``n - i``.
    Exact matrices use Berkowitz's division-free recurrence, approximate ones
    a Hessenberg reduction.
    """
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    if n == 0:
        return [ONE]
    if is_exact_matrix(M):
        return list(reversed(_berkowitz(M)))
    A = to_approx_matrix(M, profile)
    return _hessenberg_charpoly(_hessenberg(A))


def shift_submatrix(T, index_set):
    """The submatrix ``(t[i, j+1])`` for ``i, j`` in ``index_set``.

    Rows of ``T`` are labelled ``t_0 .. t_{n-1}`` and columns ``1 .. n``, so
    in 0-based array terms this is ``T[np.ix_(I, I)]``.  Indices must lie in
    ``1 .. n-1``.
    """
    T = np.asarray(T, dtype=object)
    n = T.shape[0]
    idx = sorted(set(int(i) for i in index_set))
    if not idx:
        raise IndexOutOfRange("index set must be nonempty")
    if idx[0] < 1 or idx[-1] > n - 1:
        raise IndexOutOfRange(f"indices must lie in 1..{n - 1}, got {idx}")
    return np.array(T[np.ix_(idx, idx)], dtype=object)


# -- spans -----------------------------------------------------------------------


class SpanTracker:
    """Incrementally maintained echelon basis of a row space.

    ``tol`` of ``None`` means exact arithmetic; otherwise a vector is treated
    as dependent when its reduced form has max-norm below ``tol`` times the
    vector's own max-norm.
    """

    def __init__(self, dim, tol=None):
        self.dim = dim
        self.tol = tol
        self._rows = []  # (pivot column, normalised reduced row)

    def __len__(self):
        return len(self._rows)

    def _reduce(self, v):
        w = np.array(v, dtype=object, copy=True)
        for p, row in self._rows:
            if w[p] != 0:
                w = w - w[p] * row
        return w

    def _pivot(self, w, scale):
        best, bj = None, -1
        for j, x in enumerate(w):
            m = _mag(x)
            if best is None or m > best:
                best, bj = m, j
        if self.tol is None:
            return bj if best != 0 else None
        return bj if abs(w[bj]) > self.tol * max(scale, 1) else None

    def contains(self, v):
        scale = max((abs(x) for x in v), default=0) if self.tol is not None else None
        return self._pivot(self._reduce(v), scale) is None

    def add(self, v) -> bool:
        """Add ``v``; return ``True`` when it enlarged the span."""
        scale = max((abs(x) for x in v), default=0) if self.tol is not None else None
        w = self._reduce(v)
        p = self._pivot(w, scale)
        if p is None:
            return False
        w = w / w[p]
        self._rows = [(q, r - r[p] * w) if r[p] != 0 else (q, r) for q, r in self._rows]
        self._rows.append((p, w))
        return True


def _vector_tol(vectors, profile):
    for v in vectors:
        if any(not isinstance(x, GaussianRational) for x in v):
            return profile.eps_rank
    return None


def select_independent(vectors, order=None, profile=DEFAULT_PROFILE):
    """Greedy independent subset: scan ``order`` and keep each vector that
    enlarges the span of those kept so far.  Returns the kept indices."""
    vectors = list(vectors)
    if order is None:
        order = range(len(vectors))
    if not vectors:
        return []
    span = SpanTracker(len(vectors[0]), _vector_tol(vectors, profile))
    return [i for i in order if span.add(vectors[i])]


def constrained_basis_completion(rows, coords, n, profile=DEFAULT_PROFILE):
    """Complete independent ``rows`` to a basis of ``F**n`` with vectors whose
    projections onto ``coords`` form a basis of ``F**q``.

    Built inductively: take the first standard vector ``y`` of ``F**q``
    outside the span of the projections chosen so far, lift it to ``x``
    (zero off ``coords``), then add ``w`` from the kernel of the projection
    (``0`` first, then the standard vectors off ``coords`` in index order)
    until ``x + w`` leaves the current span.
    """
    coords = [int(c) for c in coords]
    q = len(coords)
    rows = [np.asarray(r, dtype=object) for r in rows]
    if q != n - len(rows):
        raise DimensionMismatch(
            f"need exactly {n - len(rows)} projection coordinates, got {q}"
        )
    if len(set(coords)) != q or any(c < 0 or c >= n for c in coords):
        raise IndexOutOfRange(f"bad projection coordinates {coords}")
    exact = all(isinstance(x, GaussianRational) for r in rows for x in r)
    zero = ZERO if exact else profile.ctx.mpc(0)
    one = zero + 1
    tol = None if exact else profile.eps_rank
    full = SpanTracker(n, tol)
    for r in rows:
        if not full.add(r):
            raise InvariantViolation("rows passed to basis completion are dependent")
    proj = SpanTracker(q, tol)
    kernel = [c for c in range(n) if c not in set(coords)]
    out = []
    for _ in range(q):
        y = None
        for j in range(q):
            e = np.full(q, zero, dtype=object)
            e[j] = one
            if not proj.contains(e):
                y = e
                break
        if y is None:
            raise InvariantViolation("no standard vector outside projection span")
        x = np.full(n, zero, dtype=object)
        x[coords] = y
        chosen = None
        for c in [None] + kernel:
            t = x.copy()
            if c is not None:
                t[c] = t[c] + one
            if not full.contains(t):
                chosen = t
                break
        if chosen is None:
            raise InvariantViolation("kernel sweep failed to leave the span")
        full.add(chosen)
        proj.add(chosen[coords])
        out.append(chosen)
    return out
