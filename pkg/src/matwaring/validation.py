"""Input checks shared by the estimator and the CLI."""

from __future__ import annotations

import numbers

from .arithmetic import DEFAULT_PROFILE
from .exceptions import DimensionMismatch
from .linalg import asmat

__all__ = ["check_k", "check_matrix", "check_same_shape", "check_precision"]


def check_k(k):
    if isinstance(k, bool) or not isinstance(k, numbers.Integral) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    return int(k)


def check_precision(bits):
    if isinstance(bits, bool) or not isinstance(bits, numbers.Integral) or bits < 64:
        raise ValueError(f"precision must be an integer number of bits >= 64, got {bits!r}")
    return int(bits)


def check_matrix(M, name="matrix", profile=DEFAULT_PROFILE):
    """Square object matrix; exact entries stay exact."""
    try:
        return asmat(M, profile)
    except DimensionMismatch as exc:
        raise DimensionMismatch(f"{name}: {exc}") from None


def check_same_shape(*named):
    shapes = {name: M.shape for name, M in named}
    if len(set(shapes.values())) > 1:
        raise DimensionMismatch(f"shape mismatch: {shapes}")
