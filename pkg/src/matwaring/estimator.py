"""Estimator-style facade over the decomposer."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .arithmetic import ToleranceProfile
from .decomposer import make_instance, reduce, solve, verdict
from .validation import check_k, check_matrix, check_precision, check_same_shape

__all__ = ["WaringDecomposer"]


class WaringDecomposer(BaseEstimator):
    """Solve ``A1 X1^k + A2 X2^k = C`` for fixed coefficients.

    ``fit`` takes the coefficient pair and computes the reduction once;
    ``decompose`` then handles any number of targets.

    Parameters
    ----------
    k : int, default=2
        Exponent, at least 2.
    precision_bits : int, default=256
        Working precision of the approximate stage.
    seed : int, default=0
        Seed of the bounded random search.
    retries : int, default=64
        Number of random candidates tried before reporting ``unresolved``.

    Attributes
    ----------
    verdict_ : Verdict
        Surjectivity verdict for the fitted coefficients.
    r0_ : int
        Nullity of ``A2``.
    n_ : int
        Matrix size.

    Examples
    --------
    >>> from matwaring import WaringDecomposer
    >>> est = WaringDecomposer(k=3).fit([[1, 0], [0, 1]], [[0, 1], [0, 0]])
    >>> est.verdict_.tag
    'surjective'
    >>> est.decompose([[1, 2], [3, 4]]).tag
    'solved'
    """

    def __init__(self, k=2, precision_bits=256, seed=0, retries=64):
        self.k = k
        self.precision_bits = precision_bits
        self.seed = seed
        self.retries = retries

    def _profile(self):
        return ToleranceProfile(precision_bits=check_precision(self.precision_bits), seed=self.seed)

    def fit(self, A1, A2, y=None):
        """Reduce the coefficient pair; ``A1`` must be invertible."""
        k = check_k(self.k)
        profile = self._profile()
        A1 = check_matrix(A1, "A1", profile)
        A2 = check_matrix(A2, "A2", profile)
        check_same_shape(("A1", A1), ("A2", A2))
        self.profile_ = profile
        self.A1_, self.A2_ = A1, A2
        self.n_ = A1.shape[0]
        red = reduce(make_instance(A1, A2, k, profile=profile))
        self.r0_ = red.layout.r0
        self.verdict_ = verdict(self.n_, k, self.r0_)
        return self

    def decompose(self, C):
        """:class:`DecompositionResult` for one target."""
        check_is_fitted(self, "verdict_")
        C = check_matrix(C, "C", self.profile_)
        check_same_shape(("A1", self.A1_), ("C", C))
        inst = make_instance(self.A1_, self.A2_, check_k(self.k), C, profile=self.profile_)
        return solve(inst, seed=self.seed, retries=self.retries)

    def predict(self, Cs):
        """Status tag (``solved``, ``not_in_image``, ``unresolved``) per target."""
        return [self.decompose(C).tag for C in Cs]

    def transform(self, Cs):
        """``(X1, X2)`` per target, ``None`` where no solution was found."""
        out = []
        for C in Cs:
            r = self.decompose(C)
            out.append((r.X1, r.X2) if r.solved else None)
        return out
