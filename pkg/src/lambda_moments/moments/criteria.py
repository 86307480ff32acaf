"""
Moment-based separability criteria.

Every criterion consumes a MomentVector only, so moments computed from a
spectrum and moments estimated from measurement shots go through the same
code. For a separable state and a positive map Λ the normalized image
Θ = (I ⊗ Λ)(ρ) / Tr[(I ⊗ Λ)(ρ)] is a state, so its moments satisfy:

- hankel: every Hankel matrix B_l(q) is positive semidefinite
- q3: q3 >= q2²
- q3o: q3 >= αx³ + (1 - αx)³ with α = ⌊1/q2⌋ (the tight bound at fixed q2)

Running the same criteria on the partial transpose gives the PT-moment
variants.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..config import get_config
from ..errors import BadTrace, OrderTooLarge, Q2OutOfRange
from ..maps import (
    PositiveMapSpec,
    normalized_image,
    provenance_note,
    transpose_map,
)
from ..matkernel import ComplexMatrix, HermitianSpectrum, hermitian_eigen
from ..states import DensityMatrix
from .types import (
    CriterionId,
    CriterionReport,
    HankelMatrix,
    MomentVector,
    OptimalBoundParams,
)

logger = logging.getLogger(__name__)

# Guards ⌊1/q2⌋ against 1/q2 landing just below an integer
FLOOR_GUARD = 1e-12
# Slack on q2 <= 1 before it counts as out of range
Q2_SLACK = 1e-12


# =============================================================================
# Moments
# =============================================================================


def moments_from_spectrum(
    eigenvalues: np.ndarray,
    rank_tol: float | None = None,
    max_k: int | None = None,
) -> MomentVector:
    """MomentVector of an operator with the given real spectrum."""
    tol = get_config().rank_tol if rank_tol is None else rank_tol
    values = np.asarray(eigenvalues, dtype=np.float64)
    dim = values.shape[0]
    order = dim if max_k is None else max_k
    if order < 1 or order > dim:
        raise OrderTooLarge(
            f"max_k={order} must lie in [1, {dim}]", max_k=order, dim=dim
        )

    scale = max(1.0, float(np.max(np.abs(values))))
    q0 = int(np.count_nonzero(np.abs(values) > tol * scale))
    q = [float(q0)] + [float(np.sum(values**k)) for k in range(1, order + 1)]
    return MomentVector(q=tuple(q), d=dim, rank_tol=tol)


def moments_of(
    theta: ComplexMatrix,
    rank_tol: float | None = None,
    max_k: int | None = None,
) -> MomentVector:
    """
    Λ-moments q_k = Tr[Θ^k] = Σ λ_i^k of a normalized image.

    Args:
        theta: Hermitian, trace-one operator
        rank_tol: Relative threshold for q0 (config default 1e-10)
        max_k: Highest moment to compute (defaults to the dimension)

    Raises:
        NotHermitian: If theta is not Hermitian
        BadTrace: If Tr[theta] differs from 1 by more than moment_trace_tol
        OrderTooLarge: If max_k exceeds the dimension
    """
    config = get_config()
    trace = complex(np.trace(theta))
    if abs(trace - 1.0) > config.moment_trace_tol:
        raise BadTrace(
            f"Moments need a trace-one operator, got trace {trace:.12g}",
            trace=trace,
        )
    spectrum = hermitian_eigen(theta)
    return moments_from_spectrum(spectrum.eigenvalues, rank_tol, max_k)


def hankel(q: MomentVector, l: int) -> HankelMatrix:
    """
    B_l(q) with [B_l]_ij = q_{i+j+1}, i, j = 0..l.

    Raises:
        OrderTooLarge: If q_{2l+1} is not available
    """
    if l < 1 or 2 * l + 1 > q.max_order:
        raise OrderTooLarge(
            f"B_{l} needs q_{2 * l + 1}, moments go up to q_{q.max_order}",
            l=l,
            max_order=q.max_order,
        )
    idx = np.arange(l + 1)
    mat = np.array(q.q)[idx[:, None] + idx[None, :] + 1]
    return HankelMatrix(l=l, mat=mat)


def vandermonde_check(
    q: MomentVector,
    spectrum: HermitianSpectrum,
    l: int,
) -> float:
    """
    Max entry residual of B_l - V_l D V_lᵀ.

    V_l is the (l+1) x d matrix [λ_j^i] and D = diag(λ), so the product
    reproduces Σ_j λ_j^{i+k+1}.
    """
    b = hankel(q, l).mat
    values = spectrum.eigenvalues
    powers = values[None, :] ** np.arange(l + 1)[:, None]
    factored = (powers * values) @ powers.T
    return float(np.max(np.abs(b - factored)))


def _with_stderr(q: MomentVector, detail: str, *orders: int) -> str:
    if q.stderr is None:
        return detail
    spread = ", ".join(f"q{k}±{q.stderr[k]:.3g}" for k in orders)
    return f"{detail} (shot estimate: {spread})"


# =============================================================================
# Criteria
# =============================================================================


def hankel_criterion(
    q: MomentVector,
    psd_tol: float | None = None,
    criterion_id: CriterionId = "hankel",
) -> CriterionReport:
    """
    Positive semidefiniteness of every B_l, l = 1..⌊(n-1)/2⌋.

    The tolerance for B_l is psd_tol scaled by its largest |entry|. The
    report's value is the lowest eigenvalue of the smallest failing B_l, or
    of the B_l closest to failing when all pass.

    Raises:
        OrderTooLarge: If fewer than three moments are available
    """
    tol = get_config().psd_tol if psd_tol is None else psd_tol
    max_l = (q.max_order - 1) // 2
    if max_l < 1:
        raise OrderTooLarge(
            f"The Hankel criterion needs q_3, moments go up to q_{q.max_order}",
            max_order=q.max_order,
        )

    worst: tuple[float, int, float, float] | None = None
    for l in range(1, max_l + 1):
        b = hankel(q, l).mat
        lowest = float(np.linalg.eigvalsh(b)[0])
        scaled_tol = tol * max(1.0, float(np.max(np.abs(b))))
        if lowest < -scaled_tol:
            return CriterionReport(
                criterion_id=criterion_id,
                value=lowest,
                bound=0.0,
                detail=_with_stderr(
                    q, f"B_{l} fails: min eigenvalue {lowest:.6g}", 2, 3
                ),
                tolerance=scaled_tol,
            )
        ratio = lowest / scaled_tol
        if worst is None or ratio < worst[0]:
            worst = (ratio, l, lowest, scaled_tol)

    assert worst is not None
    _, l, lowest, scaled_tol = worst
    return CriterionReport(
        criterion_id=criterion_id,
        value=lowest,
        bound=0.0,
        detail=_with_stderr(
            q, f"B_1..B_{max_l} PSD; tightest B_{l} min eigenvalue {lowest:.6g}", 2, 3
        ),
        tolerance=scaled_tol,
    )


def _unphysical_q2_report(
    q: MomentVector, criterion_id: CriterionId, tolerance: float
) -> CriterionReport:
    """Report for q2 <= 0, which no trace-one positive operator has."""
    logger.warning("q2=%.12g is not positive, outside the range of any state", q.q2)
    return CriterionReport(
        criterion_id=criterion_id,
        value=q.q2,
        bound=1.0 / q.d,
        detail=_with_stderr(
            q, f"q2 outside the range of any state (q2={q.q2:.6g})", 2
        ),
        tolerance=tolerance,
    )


def q3_criterion(
    q: MomentVector,
    report_tol: float | None = None,
    criterion_id: CriterionId = "q3_lambda",
) -> CriterionReport:
    """q3 - q2² >= 0."""
    tol = get_config().report_tol if report_tol is None else report_tol
    return CriterionReport(
        criterion_id=criterion_id,
        value=q.q3,
        bound=q.q2**2,
        detail=_with_stderr(q, f"q2={q.q2:.6g}", 2, 3),
        tolerance=tol,
    )


def q3_optimal_bound(q2: float) -> OptimalBoundParams:
    """
    Smallest q3 compatible with q2 for a separable state.

    α = ⌊1/q2⌋, x = [α + √(α((α+1) q2 - 1))] / (α(α+1)) and the bound is
    αx³ + (1 - αx)³, which is at least q2² with equality when 1/q2 is an
    integer.

    Raises:
        Q2OutOfRange: If q2 <= 0 or q2 > 1
    """
    if not (0.0 < q2 <= 1.0 + Q2_SLACK):
        raise Q2OutOfRange(f"q2={q2!r} outside (0, 1]", q2=q2)
    q2 = min(q2, 1.0)
    alpha = int(math.floor(1.0 / q2 + FLOOR_GUARD))
    radicand = max(0.0, alpha * ((alpha + 1) * q2 - 1.0))
    x = (alpha + math.sqrt(radicand)) / (alpha * (alpha + 1))
    bound = alpha * x**3 + (1.0 - alpha * x) ** 3
    return OptimalBoundParams(alpha=alpha, x=x, bound=bound)


def q3_optimized_criterion(
    q: MomentVector,
    report_tol: float | None = None,
    criterion_id: CriterionId = "q3_opt",
) -> CriterionReport:
    """
    q3 against the optimal q2-dependent bound.

    q2 > 1 is impossible for the image of a separable state and is reported
    as detection directly (value 1, bound q2). A shot estimate of q2 <= 0
    is reported against 1/d, the smallest q2 of any state.
    """
    tol = get_config().report_tol if report_tol is None else report_tol
    q2 = q.q2
    if q2 <= 0.0:
        return _unphysical_q2_report(q, criterion_id, tol)
    if q2 > 1.0 + Q2_SLACK:
        logger.warning(
            "q2=%.12g exceeds 1, outside the range of any separable state", q2
        )
        return CriterionReport(
            criterion_id=criterion_id,
            value=1.0,
            bound=q2,
            detail=_with_stderr(q, f"q2 exceeds separable range (q2={q2:.6g})", 2),
            tolerance=tol,
        )

    params = q3_optimal_bound(q2)
    return CriterionReport(
        criterion_id=criterion_id,
        value=q.q3,
        bound=params.bound,
        detail=_with_stderr(
            q, f"alpha={params.alpha} x={params.x:.6g} q2={q2:.6g}", 2, 3
        ),
        tolerance=tol,
    )


def q0_consistency(q: MomentVector) -> CriterionReport:
    """
    Rank condition q0 >= ⌈1/q2⌉.

    A trace-one positive operator of rank r has q2 >= 1/r, so a smaller
    rank means Θ is not a state.
    """
    q2 = q.q2
    if q2 <= 0.0:
        return _unphysical_q2_report(q, "q0_rank", get_config().report_tol)
    min_rank = math.ceil(1.0 / q2 - FLOOR_GUARD)
    return CriterionReport(
        criterion_id="q0_rank",
        value=float(q.q0),
        bound=float(min_rank),
        detail=f"rank {q.q0} vs ceil(1/q2)={min_rank}",
        tolerance=0.5,
    )


def q3_upper_bound(q2: float, d: int) -> float:
    """
    Largest Σλ³ over d real values with Σλ = 1 and Σλ² = q2.

    Attained at one large value y = [1 + √((d-1)(d q2 - 1))] / d and d-1
    equal values (1 - y)/(d-1).
    """
    if d == 1:
        return 1.0
    radicand = max(0.0, (d - 1) * (d * q2 - 1.0))
    y = (1.0 + math.sqrt(radicand)) / d
    x = (1.0 - y) / (d - 1)
    return y**3 + (d - 1) * x**3


# =============================================================================
# Reports
# =============================================================================


def full_report(
    rho: DensityMatrix,
    lam: PositiveMapSpec,
    include_rank: bool = False,
    psd_tol: float | None = None,
    report_tol: float | None = None,
    probe_min: float | None = None,
) -> list[CriterionReport]:
    """
    All criteria for ρ under Λ, followed by the same criteria on PT-moments.

    Order: q3_lambda, q3_opt, hankel, pt_q3, pt_q3_opt, pt_hankel, then
    q0_rank when include_rank is set. Each detail ends with the provenance
    of the map it used, including a positivity probe result when given.
    """
    pt_map = transpose_map(rho.dims.dB)
    q = moments_of(normalized_image(lam, rho))
    p = moments_of(normalized_image(pt_map, rho))
    logger.debug("%s under %s: q2=%.12g q3=%.12g", rho.label, lam.name, q.q2, q.q3)

    lam_reports = [
        q3_criterion(q, report_tol),
        q3_optimized_criterion(q, report_tol),
        hankel_criterion(q, psd_tol),
    ]
    pt_reports = [
        q3_criterion(p, report_tol, criterion_id="pt_q3"),
        q3_optimized_criterion(p, report_tol, criterion_id="pt_q3_opt"),
        hankel_criterion(p, psd_tol, criterion_id="pt_hankel"),
    ]
    rank_reports = [q0_consistency(q)] if include_rank else []

    lam_note = provenance_note(lam, probe_min)
    pt_note = provenance_note(pt_map)
    return (
        [_annotate(report, lam_note) for report in lam_reports]
        + [_annotate(report, pt_note) for report in pt_reports]
        + [_annotate(report, lam_note) for report in rank_reports]
    )


def _annotate(report: CriterionReport, note: str) -> CriterionReport:
    return report.model_copy(update={"detail": f"{report.detail}; {note}"})


@dataclass(frozen=True)
class CriterionSpec:
    """A named criterion for sweeps and threshold searches."""

    name: str
    evaluate: Callable[[MomentVector], CriterionReport]
    # Map used regardless of the one requested, if any
    fixed_map: str | None = None
    description: str = ""


CRITERIA: dict[str, CriterionSpec] = {
    "q3": CriterionSpec(
        name="q3",
        evaluate=q3_criterion,
        description="q3 - q2² under the requested map",
    ),
    "q3o": CriterionSpec(
        name="q3o",
        evaluate=q3_optimized_criterion,
        description="q3 against the optimal bound under the requested map",
    ),
    "ppt3o": CriterionSpec(
        name="ppt3o",
        evaluate=lambda p: q3_optimized_criterion(p, criterion_id="pt_q3_opt"),
        fixed_map="transpose",
        description="p3 against the optimal bound (PT-moments)",
    ),
}


def criterion_margin(name: str, rho: DensityMatrix, lam: PositiveMapSpec) -> float:
    """Margin of a registered criterion for ρ; negative means detection side."""
    entry = CRITERIA[name]
    if entry.fixed_map == "transpose":
        lam = transpose_map(rho.dims.dB)
    q = moments_of(normalized_image(lam, rho), max_k=3)
    return entry.evaluate(q).margin
