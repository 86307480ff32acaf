"""
Λ-moments and the separability criteria built on them.

- types: MomentVector, HankelMatrix, CriterionReport, OptimalBoundParams
- criteria: moment extraction, Hankel/q3/optimized-q3 criteria, reports
- oracle: numerical minimum of Σλ³ at fixed q2
"""

from .criteria import (
    CRITERIA,
    CriterionSpec,
    criterion_margin,
    full_report,
    hankel,
    hankel_criterion,
    moments_from_spectrum,
    moments_of,
    q0_consistency,
    q3_criterion,
    q3_optimal_bound,
    q3_optimized_criterion,
    q3_upper_bound,
    vandermonde_check,
)
from .oracle import OracleResult, oracle_q3_argmin, oracle_q3_min, stationary_profiles
from .types import (
    CriterionReport,
    HankelMatrix,
    MomentVector,
    OptimalBoundParams,
    Verdict,
)

__all__ = [
    "CRITERIA",
    "CriterionSpec",
    "criterion_margin",
    "full_report",
    "hankel",
    "hankel_criterion",
    "moments_from_spectrum",
    "moments_of",
    "q0_consistency",
    "q3_criterion",
    "q3_optimal_bound",
    "q3_optimized_criterion",
    "q3_upper_bound",
    "vandermonde_check",
    "OracleResult",
    "oracle_q3_argmin",
    "oracle_q3_min",
    "stationary_profiles",
    "CriterionReport",
    "HankelMatrix",
    "MomentVector",
    "OptimalBoundParams",
    "Verdict",
]
