"""Value types for Λ-moments and the criteria built on them.

- MomentVector: (q0, q1, ..., qn) of a normalized image Θ
- HankelMatrix: B_l with entries q_{i+j+1}
- CriterionReport: one criterion's value, bound, margin and verdict
- OptimalBoundParams: α, x and the optimized q3 lower bound
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Literal

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveInt,
    computed_field,
    model_validator,
)

from ..errors import OrderTooLarge

# q1 = Tr[Θ] for every normalized image
UNIT_TRACE_TOL = 1e-9

CriterionId = Literal[
    "q3_lambda",
    "q3_opt",
    "hankel",
    "pt_q3",
    "pt_q3_opt",
    "pt_hankel",
    "q0_rank",
]


class Verdict(str, Enum):
    """Outcome of a separability criterion."""

    SEPARABILITY_CONSISTENT = "SeparabilityConsistent"
    ENTANGLEMENT_DETECTED = "EntanglementDetected"


class MomentVector(BaseModel):
    """
    Moments (q0, q1, ..., qn) of a trace-one Hermitian operator.

    q[0] is the number of eigenvalues above the rank tolerance and q[k] is
    Σ λ_i^k. Moments estimated from measurement shots carry a per-order
    standard error in ``stderr``.
    """

    model_config = ConfigDict(frozen=True)

    q: tuple[float, ...] = Field(..., min_length=2)
    d: PositiveInt
    rank_tol: float = Field(..., gt=0)
    stderr: tuple[float, ...] | None = None

    @model_validator(mode="after")
    def check_moments(self) -> MomentVector:
        if abs(self.q[1] - 1.0) > UNIT_TRACE_TOL:
            raise ValueError(f"q1 must equal 1, got {self.q[1]!r}")
        q0 = self.q[0]
        if q0 != int(q0) or not (1 <= q0 <= self.d):
            raise ValueError(f"q0 must be an integer in [1, {self.d}], got {q0!r}")
        if self.stderr is not None and len(self.stderr) != len(self.q):
            raise ValueError("stderr must have one entry per moment")
        return self

    @property
    def max_order(self) -> int:
        """Highest k with q_k available."""
        return len(self.q) - 1

    @property
    def q0(self) -> int:
        return int(self.q[0])

    @property
    def q2(self) -> float:
        return self.moment(2)

    @property
    def q3(self) -> float:
        return self.moment(3)

    @property
    def is_estimate(self) -> bool:
        """True for moments estimated from shots rather than a spectrum."""
        return self.stderr is not None

    def moment(self, k: int) -> float:
        """
        q_k.

        Raises:
            OrderTooLarge: If q_k was not computed
        """
        if k < 0 or k > self.max_order:
            raise OrderTooLarge(
                f"q_{k} requested but only q_0..q_{self.max_order} are available",
                k=k,
                max_order=self.max_order,
            )
        return self.q[k]


@dataclass(frozen=True)
class HankelMatrix:
    """(l+1) x (l+1) matrix [B_l]_ij = q_{i+j+1}."""

    l: int
    mat: np.ndarray = field(repr=False)


class CriterionReport(BaseModel):
    """
    Result of one separability criterion.

    margin is value - bound; the verdict is EntanglementDetected exactly
    when margin < -tolerance. Only the six report fields are serialized.
    """

    model_config = ConfigDict(frozen=True)

    criterion_id: CriterionId
    value: float
    bound: float
    detail: str = ""
    tolerance: float = Field(default=1e-9, gt=0, exclude=True)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def margin(self) -> float:
        return self.value - self.bound

    @computed_field  # type: ignore[prop-decorator]
    @property
    def verdict(self) -> Verdict:
        if self.margin < -self.tolerance:
            return Verdict.ENTANGLEMENT_DETECTED
        return Verdict.SEPARABILITY_CONSISTENT

    @property
    def detected(self) -> bool:
        return self.verdict == Verdict.ENTANGLEMENT_DETECTED


class OptimalBoundParams(BaseModel):
    """α = ⌊1/q2⌋, the optimal x and the bound αx³ + (1 - αx)³."""

    model_config = ConfigDict(frozen=True)

    alpha: PositiveInt
    x: float = Field(..., gt=0, le=1 + 1e-12)
    bound: float
