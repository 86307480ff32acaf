"""
Grid sweeps and detection thresholds over Horodecki's 3x3 family.

Each grid point is independent, so sweeps can run on a thread pool; rows
always come back in grid order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, ConfigDict

from .config import get_config
from .errors import NoSignChange, ParamOutOfRange
from .maps import PositiveMapSpec, lambda1_map, normalized_image, transpose_map
from .moments import (
    CRITERIA,
    Verdict,
    criterion_margin,
    moments_of,
    q3_criterion,
    q3_optimized_criterion,
)
from .states import HORODECKI_RANGE, horodecki_state

logger = logging.getLogger(__name__)

SCAN_POINTS = 61
CSV_COLUMNS = (
    "a",
    "q2",
    "q3",
    "H",
    "G",
    "p2",
    "p3",
    "F",
    "verdict_q3",
    "verdict_q3o",
    "verdict_ppt3o",
)


class SweepRow(BaseModel):
    """
    Criteria for σ_a under Λ and under the transpose.

    H = q3 - q2², G = q3 - (optimal bound at q2) and F = p3 - (optimal
    bound at p2).
    """

    model_config = ConfigDict(frozen=True)

    a: float
    q2: float
    q3: float
    H: float
    G: float
    p2: float
    p3: float
    F: float
    verdict_q3: Verdict
    verdict_q3o: Verdict
    verdict_ppt3o: Verdict


def horodecki_row(a: float, lam: PositiveMapSpec | None = None) -> SweepRow:
    """Evaluate one grid point; Λ defaults to Λ1."""
    lam = lambda1_map() if lam is None else lam
    rho = horodecki_state(a)
    q = moments_of(normalized_image(lam, rho), max_k=3)
    p = moments_of(normalized_image(transpose_map(3), rho), max_k=3)

    q3_report = q3_criterion(q)
    q3o_report = q3_optimized_criterion(q)
    ppt3o_report = q3_optimized_criterion(p, criterion_id="pt_q3_opt")
    return SweepRow(
        a=a,
        q2=q.q2,
        q3=q.q3,
        H=q3_report.margin,
        G=q3o_report.margin,
        p2=p.q2,
        p3=p.q3,
        F=ppt3o_report.margin,
        verdict_q3=q3_report.verdict,
        verdict_q3o=q3o_report.verdict,
        verdict_ppt3o=ppt3o_report.verdict,
    )


def _check_range(start: float, stop: float) -> None:
    lo, hi = HORODECKI_RANGE
    for name, value in (("from", start), ("to", stop)):
        if not (lo <= value <= hi):
            raise ParamOutOfRange(name, value, f"[{lo:g}, {hi:g}]")
    if start > stop:
        raise ParamOutOfRange("from", start, f"[{lo:g}, to={stop:g}]")


def sweep_horodecki(
    start: float,
    stop: float,
    steps: int,
    lam: PositiveMapSpec | None = None,
    workers: int | None = None,
) -> list[SweepRow]:
    """
    Rows for steps evenly spaced values of a in [start, stop], inclusive.

    Raises:
        ParamOutOfRange: If the range leaves [2, 5] or steps < 2
    """
    _check_range(start, stop)
    if steps < 2:
        raise ParamOutOfRange("steps", steps, "[2, ∞)")
    n_workers = get_config().sweep_workers if workers is None else workers
    if n_workers < 1:
        raise ParamOutOfRange("workers", n_workers, "[1, ∞)")
    lam = lambda1_map() if lam is None else lam
    grid = [float(a) for a in np.linspace(start, stop, steps)]

    if n_workers == 1:
        return [horodecki_row(a, lam) for a in grid]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(lambda a: horodecki_row(a, lam), grid))


def horodecki_margin(
    criterion: str,
    a: float,
    lam: PositiveMapSpec | None = None,
) -> float:
    """Margin of a registered criterion at σ_a."""
    lam = lambda1_map() if lam is None else lam
    return criterion_margin(criterion, horodecki_state(a), lam)


def find_threshold(
    criterion: str,
    lam: PositiveMapSpec | None = None,
    tol: float = 1e-6,
    scan_points: int = SCAN_POINTS,
) -> float:
    """
    The a in [2, 5] where a criterion's margin changes sign.

    A coarse scan brackets the crossing, then bisection narrows the bracket
    to width <= tol and returns its midpoint.

    Raises:
        ParamOutOfRange: If the criterion is unknown or tol < 1e-9
        NoSignChange: If the scan does not find exactly one sign change
    """
    if criterion not in CRITERIA:
        raise ParamOutOfRange("criterion", criterion, f"{sorted(CRITERIA)}")
    if tol < 1e-9:
        raise ParamOutOfRange("tol", tol, "[1e-9, ∞)")
    lam = lambda1_map() if lam is None else lam
    lo, hi = HORODECKI_RANGE

    grid = np.linspace(lo, hi, scan_points)
    detected = [horodecki_margin(criterion, float(a), lam) < 0 for a in grid]
    changes = [i for i in range(scan_points - 1) if detected[i] != detected[i + 1]]
    if len(changes) != 1:
        raise NoSignChange(
            f"Criterion '{criterion}' under {lam.name} changes sign "
            f"{len(changes)} times on [{lo:g}, {hi:g}], expected once",
            criterion=criterion,
            changes=len(changes),
        )

    left, right = float(grid[changes[0]]), float(grid[changes[0] + 1])
    right_side = detected[changes[0] + 1]
    logger.debug("%s bracket [%.6f, %.6f]", criterion, left, right)
    while right - left > tol:
        mid = 0.5 * (left + right)
        if (horodecki_margin(criterion, mid, lam) < 0) == right_side:
            right = mid
        else:
            left = mid
        logger.debug("%s bisection [%.10f, %.10f]", criterion, left, right)
    return 0.5 * (left + right)
