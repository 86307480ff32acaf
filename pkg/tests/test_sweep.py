"""
Tests for Horodecki-family sweeps and threshold searches.
"""

import pytest

from lambda_moments.errors import NoSignChange, ParamOutOfRange
from lambda_moments.maps import identity_map
from lambda_moments.moments import Verdict
from lambda_moments.sweep import (
    CSV_COLUMNS,
    find_threshold,
    horodecki_margin,
    horodecki_row,
    sweep_horodecki,
)

THRESHOLD_TOL = 5e-4


class TestHorodeckiRow:
    """Test a single grid point."""

    def test_columns(self):
        row = horodecki_row(3.5)
        assert tuple(row.model_dump()) == CSV_COLUMNS

    def test_margins_are_consistent(self):
        row = horodecki_row(3.5)
        assert row.H == pytest.approx(row.q3 - row.q2**2, abs=1e-15)
        assert row.G <= row.H + 1e-15
        assert row.verdict_q3 == Verdict.ENTANGLEMENT_DETECTED
        assert row.verdict_ppt3o == Verdict.SEPARABILITY_CONSISTENT

    def test_free_entangled(self):
        row = horodecki_row(4.9)
        assert row.F < 0
        assert row.verdict_ppt3o == Verdict.ENTANGLEMENT_DETECTED


class TestSweep:
    """Test sweep_horodecki."""

    def test_row_count_and_endpoints(self):
        rows = sweep_horodecki(2.0, 5.0, 31)
        assert len(rows) == 31
        assert rows[0].a == 2.0
        assert rows[-1].a == 5.0

    def test_separable_range_is_consistent(self):
        for row in sweep_horodecki(2.0, 3.0, 21):
            assert row.verdict_q3 == Verdict.SEPARABILITY_CONSISTENT
            assert row.verdict_q3o == Verdict.SEPARABILITY_CONSISTENT
            assert row.verdict_ppt3o == Verdict.SEPARABILITY_CONSISTENT

    def test_workers_keep_grid_order(self):
        serial = sweep_horodecki(2.0, 5.0, 16, workers=1)
        threaded = sweep_horodecki(2.0, 5.0, 16, workers=4)
        assert serial == threaded

    def test_workers_from_environment(self, monkeypatch):
        monkeypatch.setenv("LAMOM_SWEEP_WORKERS", "3")
        assert len(sweep_horodecki(2.0, 2.5, 6)) == 6

    @pytest.mark.parametrize(
        "start,stop,steps",
        [(1.5, 5.0, 10), (2.0, 5.5, 10), (4.0, 3.0, 10), (2.0, 5.0, 1)],
    )
    def test_bad_arguments(self, start, stop, steps):
        with pytest.raises(ParamOutOfRange):
            sweep_horodecki(start, stop, steps)


class TestThreshold:
    """Test find_threshold."""

    @pytest.mark.parametrize(
        "criterion,expected",
        [("q3", 3.1658), ("q3o", 3.0291), ("ppt3o", 4.7259)],
    )
    def test_known_thresholds(self, criterion, expected):
        assert find_threshold(criterion, tol=1e-6) == pytest.approx(
            expected, abs=THRESHOLD_TOL
        )

    def test_margin_changes_sign_at_threshold(self):
        value = find_threshold("q3o", tol=1e-8)
        assert horodecki_margin("q3o", value - 1e-4) > 0
        assert horodecki_margin("q3o", value + 1e-4) < 0

    def test_no_sign_change(self):
        with pytest.raises(NoSignChange) as exc_info:
            find_threshold("q3", lam=identity_map(3))
        assert exc_info.value.context["changes"] == 0

    def test_unknown_criterion(self):
        with pytest.raises(ParamOutOfRange):
            find_threshold("hankel")

    def test_tolerance_floor(self):
        with pytest.raises(ParamOutOfRange):
            find_threshold("q3", tol=1e-10)
