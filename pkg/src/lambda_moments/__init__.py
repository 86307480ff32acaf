"""
lambda-moments: entanglement detection with moments of positive-map images.

For a bipartite state ρ and a positive but not completely positive map Λ,
the normalized image Θ = (I ⊗ Λ)(ρ) / Tr[(I ⊗ Λ)(ρ)] is a state whenever ρ
is separable. The moments q_k = Tr[Θ^k] therefore satisfy Hankel-matrix
positivity and the q3 inequalities, and violations certify entanglement.

Quick start:
    from lambda_moments import full_report, horodecki_state, lambda1_map

    for report in full_report(horodecki_state(3.5), lambda1_map()):
        print(report.criterion_id, report.verdict.value)

Command line:
    lamom threshold --criterion q3o
    lamom sweep --from 2 --to 5 --steps 301 --out fig.csv

Configuration comes from LAMOM_* environment variables and .env files
(.env.<LAMOM_ENV> is preferred over .env).
"""

import os
from pathlib import Path

try:
    from dotenv import load_dotenv

    env = os.getenv("LAMOM_ENV", "development")
    env_path = Path.cwd() / f".env.{env}"
    if env_path.exists():
        load_dotenv(env_path)
    elif (Path.cwd() / ".env").exists():
        load_dotenv(Path.cwd() / ".env")

except ImportError:
    # Without python-dotenv, LAMOM_* variables must be set externally
    pass

__version__ = "0.1.0"

from .config import Config, get_config
from .errors import LambdaMomentsError
from .maps import (
    PositiveMapSpec,
    adjoint_map,
    apply_map,
    extend_and_apply,
    lambda1_map,
    normalized_image,
    random_positive_map,
    transpose_map,
)
from .measurement import (
    MeasurementOperator,
    ShotEstimate,
    born_sample,
    build_observable,
    expectation,
)
from .moments import (
    CriterionReport,
    MomentVector,
    Verdict,
    full_report,
    hankel_criterion,
    moments_of,
    q3_criterion,
    q3_optimal_bound,
    q3_optimized_criterion,
)
from .states import (
    BipartiteDims,
    DensityMatrix,
    horodecki_state,
    max_entangled_state,
    maximally_mixed,
)

__all__ = [
    "__version__",
    "Config",
    "get_config",
    "LambdaMomentsError",
    "PositiveMapSpec",
    "adjoint_map",
    "apply_map",
    "extend_and_apply",
    "lambda1_map",
    "normalized_image",
    "random_positive_map",
    "transpose_map",
    "MeasurementOperator",
    "ShotEstimate",
    "born_sample",
    "build_observable",
    "expectation",
    "CriterionReport",
    "MomentVector",
    "Verdict",
    "full_report",
    "hankel_criterion",
    "moments_of",
    "q3_criterion",
    "q3_optimal_bound",
    "q3_optimized_criterion",
    "BipartiteDims",
    "DensityMatrix",
    "horodecki_state",
    "max_entangled_state",
    "maximally_mixed",
]
