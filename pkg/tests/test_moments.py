"""
Tests for Λ-moments and the separability criteria.

Verifies that:
1. Moments agree with traces of matrix powers
2. Hankel matrices factor through the spectrum
3. The q3 and optimized q3 bounds hold for separable states and detect
   the bound entangled range of the Horodecki family under Λ1
4. Reports carry consistent margins and verdicts
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import registry_maps, registry_thetas
from lambda_moments.errors import BadTrace, NotHermitian, OrderTooLarge, Q2OutOfRange
from lambda_moments.maps import (
    identity_map,
    lambda1_map,
    normalized_image,
    transpose_map,
)
from lambda_moments.matkernel import hermitian_eigen, power_trace
from lambda_moments.moments import (
    CRITERIA,
    CriterionReport,
    MomentVector,
    Verdict,
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
from lambda_moments.states import (
    BipartiteDims,
    horodecki_state,
    max_entangled_state,
    maximally_mixed,
    random_separable_state,
)

A_GRID_301 = np.linspace(2.0, 5.0, 301)


def _lambda1_moments(a: float) -> MomentVector:
    return moments_of(normalized_image(lambda1_map(), horodecki_state(a)))


def _pt_moments(rho) -> MomentVector:
    return moments_of(normalized_image(transpose_map(rho.dims.dB), rho))


# =============================================================================
# Moment vectors
# =============================================================================


class TestMomentsOf:
    """Test moment extraction from a normalized image."""

    def test_maximally_mixed(self):
        q = moments_of(np.eye(9) / 9)
        assert q.q0 == 9
        for k in range(1, 10):
            assert q.moment(k) == pytest.approx(9.0 ** (1 - k), rel=1e-12)

    def test_pure_projector(self):
        theta = np.zeros((9, 9))
        theta[0, 0] = 1.0
        q = moments_of(theta)
        assert q.q0 == 1
        assert all(q.moment(k) == pytest.approx(1.0) for k in range(1, 10))

    def test_against_matrix_powers(self):
        theta = normalized_image(lambda1_map(), horodecki_state(3.5))
        q = moments_of(theta)
        assert abs(q.moment(1) - 1.0) <= 1e-12
        for k in (2, 3):
            assert abs(q.moment(k) - power_trace(theta, k).real) <= 1e-12

    def test_registry_consistency(self):
        """|q_k - Tr[Θ^k]| <= 1e-11 for k <= 5 across the registry."""
        for label, theta in registry_thetas():
            q = moments_of(theta)
            assert abs(q.moment(1) - 1.0) <= 1e-10, label
            for k in range(1, 6):
                assert abs(q.moment(k) - power_trace(theta, k).real) <= 1e-11, label

    def test_max_k(self):
        q = moments_of(np.eye(9) / 9, max_k=3)
        assert q.max_order == 3
        with pytest.raises(OrderTooLarge):
            q.moment(4)

    def test_max_k_beyond_dimension(self):
        with pytest.raises(OrderTooLarge):
            moments_of(np.eye(4) / 4, max_k=5)

    def test_bad_trace(self):
        with pytest.raises(BadTrace):
            moments_of(np.eye(4) / 2)

    def test_not_hermitian(self):
        theta = np.eye(2, dtype=complex) / 2
        theta[0, 1] = 0.3
        with pytest.raises(NotHermitian):
            moments_of(theta)

    def test_rank_tolerance_is_relative(self):
        q = moments_from_spectrum(np.array([1.0 - 1e-12, 1e-12, 0.0]))
        assert q.q0 == 1
        q = moments_from_spectrum(np.array([0.5, 0.5, 0.0]), rank_tol=1e-10)
        assert q.q0 == 2

    def test_moment_vector_requires_unit_q1(self):
        with pytest.raises(ValueError):
            MomentVector(q=(3.0, 0.9, 0.3), d=3, rank_tol=1e-10)

    def test_moment_vector_requires_integer_q0(self):
        with pytest.raises(ValueError):
            MomentVector(q=(2.5, 1.0, 0.3), d=3, rank_tol=1e-10)


# =============================================================================
# Hankel matrices
# =============================================================================


class TestHankel:
    """Test B_l(q) and its spectral factorization."""

    def test_l1_layout(self):
        q = _lambda1_moments(3.5)
        b = hankel(q, 1).mat
        assert np.array_equal(b, [[q.q[1], q.q[2]], [q.q[2], q.q[3]]])

    def test_maximally_mixed_l1(self):
        b = hankel(moments_of(np.eye(9) / 9), 1).mat
        assert np.allclose(b, [[1, 1 / 9], [1 / 9, 1 / 81]])
        assert abs(np.linalg.det(b)) <= 1e-15

    def test_l2_top_left(self):
        b = hankel(_lambda1_moments(4.0), 2).mat
        assert b.shape == (3, 3)
        assert b[0, 0] == pytest.approx(1.0)
        assert np.array_equal(b, b.T)

    def test_order_too_large(self):
        with pytest.raises(OrderTooLarge):
            hankel(moments_of(np.eye(9) / 9), 5)

    def test_vandermonde_registry(self):
        for label, theta in registry_thetas():
            spectrum = hermitian_eigen(theta)
            q = moments_from_spectrum(spectrum.eigenvalues)
            for l in (1, 2, 3):
                assert vandermonde_check(q, spectrum, l) <= 1e-10, label

    def test_vandermonde_pure(self):
        theta = np.zeros((4, 4))
        theta[0, 0] = 1.0
        spectrum = hermitian_eigen(theta)
        q = moments_of(theta)
        assert np.array_equal(hankel(q, 1).mat, np.ones((2, 2)))
        assert vandermonde_check(q, spectrum, 1) <= 1e-15

    def test_vandermonde_high_order(self):
        theta = normalized_image(lambda1_map(), horodecki_state(4.5))
        spectrum = hermitian_eigen(theta)
        q = moments_of(theta)
        assert vandermonde_check(q, spectrum, 4) <= 1e-9


class TestHankelCriterion:
    """Test positivity of all Hankel matrices."""

    def test_product_state_consistent(self):
        rho = maximally_mixed(BipartiteDims(dA=3, dB=3))
        for lam in registry_maps():
            report = hankel_criterion(moments_of(normalized_image(lam, rho)))
            assert report.verdict == Verdict.SEPARABILITY_CONSISTENT, lam.name

    def test_bound_entangled_detected_at_l1(self):
        report = hankel_criterion(_lambda1_moments(3.5))
        assert report.detected
        assert "B_1" in report.detail
        assert report.bound == 0.0

    def test_non_positive_spectrum(self):
        q = moments_from_spectrum(np.array([0.6, 0.5, -0.1]))
        report = hankel_criterion(q)
        assert report.detected
        lowest = np.linalg.eigvalsh(hankel(q, 1).mat)[0]
        assert report.value == pytest.approx(lowest)

    def test_needs_third_moment(self):
        with pytest.raises(OrderTooLarge):
            hankel_criterion(moments_of(np.eye(2) / 2))

    def test_forward_direction_on_random_separable_states(self):
        """No separable state is flagged by any registry map."""
        maps = registry_maps()
        for seed in range(200):
            n_terms = 1 + seed % 10
            rho = random_separable_state(3, 3, n_terms=n_terms, seed=seed)
            for lam in maps:
                q = moments_of(normalized_image(lam, rho))
                report = hankel_criterion(q)
                assert not report.detected, (seed, lam.name)
                for l in range(1, 5):
                    lowest = np.linalg.eigvalsh(hankel(q, l).mat)[0]
                    assert lowest >= -1e-9, (seed, lam.name, l)


# =============================================================================
# q3 criteria
# =============================================================================


class TestQ3Criterion:
    """Test q3 - q2² >= 0."""

    def test_maximally_mixed_boundary(self):
        report = q3_criterion(moments_of(np.eye(9) / 9))
        assert report.margin == pytest.approx(0.0, abs=1e-15)
        assert report.verdict == Verdict.SEPARABILITY_CONSISTENT

    def test_max_entangled_under_transpose(self):
        report = q3_criterion(_pt_moments(max_entangled_state(3)))
        assert report.value == pytest.approx(1 / 9)
        assert report.bound == pytest.approx(1.0)
        assert report.margin == pytest.approx(-8 / 9)
        assert report.detected

    def test_below_threshold_consistent(self):
        assert not q3_criterion(_lambda1_moments(3.0)).detected

    def test_above_threshold_detected(self):
        assert q3_criterion(_lambda1_moments(3.5)).detected


class TestOptimalBound:
    """Test the optimal q2-dependent lower bound on q3."""

    @pytest.mark.parametrize("q2,alpha", [(0.5, 2), (1 / 9, 9)])
    def test_integer_reciprocal_is_q2_squared(self, q2, alpha):
        params = q3_optimal_bound(q2)
        assert params.alpha == alpha
        assert params.x == pytest.approx(q2)
        assert params.bound == pytest.approx(q2**2, abs=1e-15)

    def test_generic_value(self):
        params = q3_optimal_bound(0.4)
        assert params.alpha == 2
        assert params.x == pytest.approx(0.438743, abs=1e-6)
        assert params.bound == pytest.approx(0.170751, abs=1e-6)

    def test_pure(self):
        params = q3_optimal_bound(1.0)
        assert params.alpha == 1
        assert params.bound == pytest.approx(1.0)

    def test_floor_guard(self):
        # 1/(1/3) may land just below 3 in floating point
        assert q3_optimal_bound(1 / 3).alpha == 3
        assert q3_optimal_bound(1 / 7).alpha == 7

    @pytest.mark.parametrize("q2", [0.0, -0.1, 1.01])
    def test_out_of_range(self, q2):
        with pytest.raises(Q2OutOfRange):
            q3_optimal_bound(q2)

    def test_dominates_q2_squared_on_grid(self):
        for q2 in np.arange(1, 1001) * 1e-3:
            assert q3_optimal_bound(float(q2)).bound >= q2**2 - 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 8, 10, 25, 100])
    def test_equality_at_unit_fractions(self, n):
        assert abs(q3_optimal_bound(1 / n).bound - 1 / n**2) <= 1e-12

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1.0))
    def test_dominance_property(self, q2):
        params = q3_optimal_bound(q2)
        assert params.bound >= q2**2 - 1e-12
        assert 0 < params.x <= 1 + 1e-12
        assert params.alpha == math.floor(1 / q2 + 1e-12)


class TestQ3OptimizedCriterion:
    """Test q3 against the optimal bound."""

    def test_detects_beyond_threshold(self):
        report = q3_optimized_criterion(_lambda1_moments(3.1))
        assert report.detected
        assert "alpha=" in report.detail

    def test_q3_misses_what_optimized_detects(self):
        q = _lambda1_moments(3.1)
        assert not q3_criterion(q).detected
        assert q3_optimized_criterion(q).detected

    def test_pt_variant_on_free_entangled_state(self):
        p = _pt_moments(horodecki_state(4.8))
        assert q3_optimized_criterion(p, criterion_id="pt_q3_opt").detected

    def test_maximally_mixed_equality(self):
        rho = maximally_mixed(BipartiteDims(dA=3, dB=3))
        for lam in (identity_map(3), transpose_map(3)):
            report = q3_optimized_criterion(moments_of(normalized_image(lam, rho)))
            assert report.margin == pytest.approx(0.0, abs=1e-12), lam.name
            assert not report.detected

    def test_q2_above_one_detects(self, caplog):
        q = MomentVector(q=(3.0, 1.0, 1.2, 0.9), d=3, rank_tol=1e-10)
        with caplog.at_level("WARNING", logger="lambda_moments"):
            report = q3_optimized_criterion(q)
        assert report.detected
        assert "q2 exceeds separable range" in report.detail
        assert any("exceeds 1" in r.message for r in caplog.records)

    def test_q3_margin_decreases_along_family(self):
        h_values = [q3_criterion(_lambda1_moments(float(a))).margin for a in A_GRID_301]
        assert np.all(np.diff(h_values) < 0)

    def test_optimized_margin_crosses_zero_once(self):
        # Not monotone: α steps from 7 to 6 near a = 4.83
        g_values = np.array(
            [
                q3_optimized_criterion(_lambda1_moments(float(a))).margin
                for a in A_GRID_301
            ]
        )
        negative = g_values < -1e-12
        assert np.count_nonzero(np.diff(negative.astype(int))) == 1
        assert np.all(negative[A_GRID_301 > 3.0291 + 1e-3])
        assert not np.any(negative[A_GRID_301 <= 3.0])

    def test_q2_not_positive_reported(self, caplog):
        q = MomentVector(q=(9.0, 1.0, -0.05, 0.01), d=9, rank_tol=1e-10)
        with caplog.at_level("WARNING", logger="lambda_moments"):
            report = q3_optimized_criterion(q)
        assert report.detected
        assert report.value == -0.05
        assert report.bound == pytest.approx(1 / 9)
        assert "outside the range of any state" in report.detail
        assert any("not positive" in r.message for r in caplog.records)


# =============================================================================
# Supplementary checks
# =============================================================================


class TestRankAndUpperBound:
    """Test the q0 rank condition and the q3 upper limit."""

    def test_rank_consistent_for_states(self):
        for label, theta in registry_thetas():
            if "identity" in label:
                assert not q0_consistency(moments_of(theta)).detected, label

    def test_rank_with_q2_not_positive(self):
        q = MomentVector(q=(9.0, 1.0, 0.0, 0.01), d=9, rank_tol=1e-10)
        report = q0_consistency(q)
        assert report.criterion_id == "q0_rank"
        assert report.detected
        assert "outside the range of any state" in report.detail

    def test_rank_violation(self):
        # rank 2 with q2 = 0.34 < 1/2 is impossible for a state
        q = MomentVector(q=(2.0, 1.0, 0.34, 0.1), d=4, rank_tol=1e-10)
        report = q0_consistency(q)
        assert report.detected
        assert report.bound == 3.0

    def test_upper_bound_holds_on_registry(self):
        for label, theta in registry_thetas():
            q = moments_of(theta)
            assert q.q3 <= q3_upper_bound(q.q2, q.d) + 1e-12, label

    def test_upper_bound_extremes(self):
        assert q3_upper_bound(1 / 9, 9) == pytest.approx(1 / 81)
        assert q3_upper_bound(1.0, 9) == pytest.approx(1.0)


# =============================================================================
# Reports
# =============================================================================


class TestReports:
    """Test CriterionReport and full_report."""

    def test_verdict_follows_margin(self):
        report = CriterionReport(criterion_id="q3_lambda", value=0.1, bound=0.1 + 2e-9)
        assert report.detected
        report = CriterionReport(criterion_id="q3_lambda", value=0.1, bound=0.1 + 5e-10)
        assert not report.detected

    def test_serialized_fields(self):
        report = q3_criterion(_lambda1_moments(3.5))
        data = report.model_dump(mode="json")
        assert set(data) == {
            "criterion_id",
            "value",
            "bound",
            "margin",
            "verdict",
            "detail",
        }
        assert data["verdict"] == "EntanglementDetected"

    def test_separable_member(self):
        reports = full_report(horodecki_state(2.5), lambda1_map())
        assert [r.criterion_id for r in reports] == [
            "q3_lambda",
            "q3_opt",
            "hankel",
            "pt_q3",
            "pt_q3_opt",
            "pt_hankel",
        ]
        assert all(not r.detected for r in reports)

    def test_bound_entangled_member(self):
        reports = {
            r.criterion_id: r for r in full_report(horodecki_state(3.5), lambda1_map())
        }
        assert reports["q3_lambda"].detected
        assert reports["q3_opt"].detected
        assert reports["hankel"].detected
        assert not reports["pt_q3"].detected
        assert not reports["pt_q3_opt"].detected
        assert not reports["pt_hankel"].detected

    def test_free_entangled_member(self):
        reports = {
            r.criterion_id: r for r in full_report(horodecki_state(4.9), lambda1_map())
        }
        assert reports["q3_lambda"].detected
        assert reports["q3_opt"].detected
        assert reports["hankel"].detected
        assert reports["pt_q3_opt"].detected

    def test_include_rank(self):
        reports = full_report(horodecki_state(3.5), lambda1_map(), include_rank=True)
        assert len(reports) == 7
        assert reports[-1].criterion_id == "q0_rank"

    def test_criteria_registry(self):
        assert set(CRITERIA) == {"q3", "q3o", "ppt3o"}
        rho = horodecki_state(3.5)
        assert criterion_margin("q3", rho, lambda1_map()) < 0
        assert criterion_margin("ppt3o", rho, lambda1_map()) >= -1e-12
