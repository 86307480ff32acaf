"""
Numerical minimum of Σλ³ at fixed q2.

Solves  min Σ λ_i³  subject to  Σ λ_i = 1,  Σ λ_i² = q2,  λ_i >= 0
over d entries without using the closed-form bound:

1. Enumerate the stationary profiles (x repeated m times, y, zeros) for
   m = 1..d-1, where mx + y = 1 and mx² + y² = q2 with x >= y >= 0.
2. Run seeded random-restart SLSQP searches and keep any feasible point
   that beats the best profile.
"""

from __future__ import annotations

import logging
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.optimize import minimize

from ..config import get_config
from ..errors import Infeasible

logger = logging.getLogger(__name__)

PROFILE_TOL = 1e-12
CONSTRAINT_TOL = 1e-10
IMPROVEMENT_TOL = 1e-10


class OracleResult(BaseModel):
    """Minimum value, a minimizer sorted descending, and how it was found."""

    model_config = ConfigDict(frozen=True)

    value: float
    argmin: tuple[float, ...]
    source: Literal["profile", "local_search"]
    local_searches: int = 0


def stationary_profiles(q2: float, d: int) -> list[np.ndarray]:
    """Feasible (x × m, y, 0, ...) spectra with Σλ = 1 and Σλ² = q2."""
    profiles = []
    for m in range(1, d):
        radicand = m * ((m + 1) * q2 - 1.0)
        if radicand < -PROFILE_TOL:
            continue
        root = math.sqrt(max(0.0, radicand))
        for x in ((m + root) / (m * (m + 1)), (m - root) / (m * (m + 1))):
            y = 1.0 - m * x
            if y < -PROFILE_TOL or x < y - PROFILE_TOL:
                continue
            profile = np.zeros(d)
            profile[:m] = x
            profile[m] = max(y, 0.0)
            profiles.append(profile)
    return profiles


def _local_search(q2: float, start: np.ndarray) -> np.ndarray | None:
    constraints = [
        {
            "type": "eq",
            "fun": lambda v: np.sum(v) - 1.0,
            "jac": lambda v: np.ones_like(v),
        },
        {
            "type": "eq",
            "fun": lambda v: np.sum(v**2) - q2,
            "jac": lambda v: 2.0 * v,
        },
    ]
    result = minimize(
        lambda v: float(np.sum(v**3)),
        start,
        jac=lambda v: 3.0 * v**2,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * start.shape[0],
        constraints=constraints,
        options={"ftol": 1e-14, "maxiter": 500},
    )
    v = np.clip(result.x, 0.0, 1.0)
    residual = max(abs(np.sum(v) - 1.0), abs(np.sum(v**2) - q2))
    if residual > CONSTRAINT_TOL:
        return None
    return v


def oracle_q3_argmin(
    q2: float,
    d: int,
    restarts: int | None = None,
    seed: int | None = None,
) -> OracleResult:
    """
    Minimum of Σλ³ over d-entry probability vectors with Σλ² = q2.

    Args:
        q2: Purity constraint, 1/d <= q2 <= 1
        d: Number of entries
        restarts: Random SLSQP restarts (config default 200)
        seed: Seed of the Dirichlet starting points (config default 0)

    Raises:
        Infeasible: If no stationary profile satisfies the constraints
    """
    config = get_config()
    n_restarts = config.oracle_restarts if restarts is None else restarts
    rng = np.random.default_rng(config.oracle_seed if seed is None else seed)

    profiles = stationary_profiles(q2, d)
    if not profiles:
        raise Infeasible(
            f"No spectrum of size {d} has trace 1 and q2={q2!r}", q2=q2, d=d
        )
    best = min(profiles, key=lambda v: float(np.sum(v**3)))
    best_value = float(np.sum(best**3))
    source: Literal["profile", "local_search"] = "profile"

    accepted = 0
    for _ in range(n_restarts):
        candidate = _local_search(q2, rng.dirichlet(np.ones(d)))
        if candidate is None:
            continue
        accepted += 1
        value = float(np.sum(candidate**3))
        if value < best_value - IMPROVEMENT_TOL:
            best, best_value, source = candidate, value, "local_search"

    logger.debug(
        "q3 oracle q2=%.6g d=%d: %d profiles, %d/%d feasible local searches, "
        "minimum %.12g from %s",
        q2,
        d,
        len(profiles),
        accepted,
        n_restarts,
        best_value,
        source,
    )
    return OracleResult(
        value=best_value,
        argmin=tuple(float(v) for v in np.sort(best)[::-1]),
        source=source,
        local_searches=accepted,
    )


def oracle_q3_min(
    q2: float,
    d: int,
    restarts: int | None = None,
    seed: int | None = None,
) -> float:
    """Value of oracle_q3_argmin."""
    return oracle_q3_argmin(q2, d, restarts, seed).value
