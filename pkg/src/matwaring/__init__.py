"""Constructive decompositions ``C = A1 X1^k + A2 X2^k`` of complex matrices."""

from .arithmetic import DEFAULT_PROFILE, GaussianRational, ToleranceProfile
from .decomposer import (
    DecompositionResult,
    Verdict,
    make_instance,
    membership_n3,
    non_surjectivity_witness,
    reduce,
    solve,
    verdict,
)
from .estimator import WaringDecomposer
from .exceptions import WaringError
from .jordan import jordan_form, zero_split
from .powers import is_kth_power, matrix_kth_root, miller_power

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PROFILE",
    "GaussianRational",
    "ToleranceProfile",
    "DecompositionResult",
    "Verdict",
    "make_instance",
    "membership_n3",
    "non_surjectivity_witness",
    "reduce",
    "solve",
    "verdict",
    "WaringDecomposer",
    "WaringError",
    "jordan_form",
    "zero_split",
    "is_kth_power",
    "matrix_kth_root",
    "miller_power",
]
