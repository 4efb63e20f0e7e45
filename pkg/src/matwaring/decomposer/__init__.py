"""Reduction, verdicts and constructive decompositions ``C = A1 X1^k + A2 X2^k``."""

from .constructions import (
    Plan,
    build_rank_criterion_t,
    choose_mu,
    plan_full_nilpotent,
    plan_invertible,
    plan_one_nilpotent_block,
    plan_rank_criterion,
)
from .lowdim import (
    IN_IMAGE,
    membership_n3,
    miller_certificate,
    non_surjectivity_witness,
    solve_low_dim,
)
from .reduction import make_instance, reduce, verdict
from .solver import realize, residual, solve
from .types import (
    NOT_IN_IMAGE,
    NOT_SURJECTIVE,
    SOLVED,
    SURJECTIVE,
    UNKNOWN,
    UNRESOLVED,
    DecompositionResult,
    Layout,
    ProblemInstance,
    ReducedInstance,
    Verdict,
)

__all__ = [
    "Plan",
    "build_rank_criterion_t",
    "choose_mu",
    "plan_full_nilpotent",
    "plan_invertible",
    "plan_one_nilpotent_block",
    "plan_rank_criterion",
    "IN_IMAGE",
    "membership_n3",
    "miller_certificate",
    "non_surjectivity_witness",
    "solve_low_dim",
    "make_instance",
    "reduce",
    "verdict",
    "realize",
    "residual",
    "solve",
    "NOT_IN_IMAGE",
    "NOT_SURJECTIVE",
    "SOLVED",
    "SURJECTIVE",
    "UNKNOWN",
    "UNRESOLVED",
    "DecompositionResult",
    "Layout",
    "ProblemInstance",
    "ReducedInstance",
    "Verdict",
]
