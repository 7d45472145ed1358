"""Tests for the randomized perturbation-bound harness."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.core.perturb_verify import (
    check_eigenvalue_shift,
    check_indicator_bounds,
    check_pconv_sum,
    check_projection_bound,
    check_projection_energy,
    check_weyl,
    cluster_gap,
    format_report_line,
    perturb_operator,
    random_psd,
    run_sweep,
)
from src.core.spectra import operator_norm
from src.exceptions import DimensionError, DomainError, FilterBoundError, InputValidationError
from src.models.regularization import FilterKind, FilterSpec
from src.models.verification import BoundReport, BoundStatus


@pytest.fixture
def perturbed_pair(psd_matrix):
    """(A, A^δ) at δ = 1e-4."""
    return psd_matrix, perturb_operator(psd_matrix, 1e-4, seed=8)


class TestRandomPSD:
    """Test random operator generation."""

    def test_hermitian_with_prescribed_spectrum(self):
        """Eigenvalues are decay^(n−1)."""
        a = random_psd(6, seed=1, decay=0.3)
        assert_allclose(a, a.conj().T)
        assert_allclose(np.sort(np.linalg.eigvalsh(a))[::-1], 0.3 ** np.arange(6), atol=1e-13)

    def test_deterministic(self):
        """Same seed, same matrix."""
        np.testing.assert_array_equal(random_psd(5, 9, 0.5), random_psd(5, 9, 0.5))

    @pytest.mark.parametrize("dim,decay", [(0, 0.5), (3, 0.0), (3, 1.0)])
    def test_invalid_arguments(self, dim, decay):
        """dim ≥ 1 and decay in (0, 1)."""
        with pytest.raises(DomainError):
            random_psd(dim, 0, decay)


class TestPerturbOperator:
    """Test the controlled perturbation."""

    @pytest.mark.parametrize("delta", [1e-2, 1e-4, 0.2])
    def test_norm_and_positivity(self, psd_matrix, delta):
        """0 ≤ A^δ − A ≤ δ I."""
        a_delta = perturb_operator(psd_matrix, delta, seed=4)
        diff = a_delta - psd_matrix
        assert operator_norm(diff) <= delta * (1 + 1e-12)
        eig = np.linalg.eigvalsh(diff)
        assert eig.min() >= -1e-14
        assert eig.max() <= delta * (1 + 1e-12)

    def test_zero_delta_copies(self, psd_matrix):
        """δ = 0 leaves the operator unchanged."""
        np.testing.assert_array_equal(perturb_operator(psd_matrix, 0.0, seed=1), psd_matrix)

    def test_negative_delta(self, psd_matrix):
        """δ must be nonnegative."""
        with pytest.raises(DomainError):
            perturb_operator(psd_matrix, -1e-3, seed=1)

    def test_non_hermitian(self):
        """Only Hermitian operators are perturbed."""
        with pytest.raises(InputValidationError):
            perturb_operator(np.array([[1.0, 1.0], [0.0, 1.0]]), 1e-3, seed=1)


class TestClusterGap:
    """Test the cluster gap helper."""

    def test_simple(self):
        """Nearest other eigenvalue."""
        assert cluster_gap(np.array([3.0, 2.0, 0.5]), 1) == pytest.approx(1.0)

    def test_cluster_members_are_ignored(self):
        """Eigenvalues within the relative tolerance belong to the cluster."""
        values = np.array([2.0, 2.0 * (1 + 1e-12), 1.0])
        assert cluster_gap(values, 0) == pytest.approx(1.0)

    def test_single_cluster(self):
        """No outside eigenvalue gives an infinite gap."""
        assert math.isinf(cluster_gap(np.array([1.0, 1.0]), 0))


class TestSpectrumChecks:
    """Test the Weyl and eigenvalue-shift checks."""

    def test_weyl_satisfied(self, perturbed_pair):
        """Spectrum distance is at most ‖A − A^δ‖."""
        report = check_weyl(*perturbed_pair)
        assert report.status is BoundStatus.SATISFIED
        assert report.lhs <= report.rhs

    def test_shift_satisfied(self, perturbed_pair):
        """Sorted eigenvalues move by at most ‖A − A^δ‖."""
        report = check_eigenvalue_shift(*perturbed_pair)
        assert report.satisfied
        assert report.metadata["dim"] == 8

    def test_identical_operators(self, psd_matrix):
        """Zero perturbation gives zero on both sides."""
        report = check_weyl(psd_matrix, psd_matrix)
        assert report.lhs == pytest.approx(0.0, abs=1e-14)
        assert report.satisfied

    def test_shape_mismatch(self, psd_matrix):
        """Operators must have the same shape."""
        with pytest.raises(DimensionError):
            check_weyl(psd_matrix, np.eye(3))


class TestProjectionChecks:
    """Test the spectral projection checks."""

    def test_isolated_top_eigenvalue(self, perturbed_pair):
        """‖P₁ − P₁^δ‖ ≤ 2√δ for an isolated eigenvalue."""
        report = check_projection_bound(*perturbed_pair, n=1)
        assert report.status is BoundStatus.SATISFIED
        assert report.rhs == pytest.approx(2.0 * math.sqrt(report.metadata["delta"]))

    def test_explicit_radius(self, perturbed_pair):
        """With radius ρ/2 the bound is δ/(ρ/2 − δ)."""
        report = check_projection_bound(*perturbed_pair, n=1, rho_half=0.1, delta=1e-4)
        assert report.satisfied
        assert report.rhs == pytest.approx(1e-4 / (0.1 - 1e-4))

    def test_radius_must_exceed_delta(self, perturbed_pair):
        """ρ/2 ≤ δ is rejected."""
        with pytest.raises(DomainError):
            check_projection_bound(*perturbed_pair, n=1, rho_half=1e-4, delta=1e-4)

    def test_skipped_without_gap(self):
        """A cluster closer than 2√δ skips the check."""
        a = np.diag([1.0, 0.999, 0.5])
        report = check_projection_bound(a, perturb_operator(a, 1e-2, seed=2), n=1)
        assert report.status is BoundStatus.SKIPPED
        assert math.isnan(report.lhs)
        assert report.satisfied
        assert not report.checked

    def test_nominal_delta_below_measurement(self, perturbed_pair):
        """A nominal δ smaller than the true perturbation is an error."""
        with pytest.raises(DomainError):
            check_projection_bound(*perturbed_pair, n=1, delta=1e-9)

    def test_index_out_of_range(self, perturbed_pair):
        """n is 1-based and at most the dimension."""
        with pytest.raises(DomainError):
            check_projection_bound(*perturbed_pair, n=9)

    def test_energy(self, perturbed_pair, complex_vector):
        """Projected energy grows by at most 4‖x‖²‖P − P^δ‖."""
        report = check_projection_energy(*perturbed_pair, n=1, x=complex_vector)
        assert report.status is BoundStatus.SATISFIED


class TestPConvSum:
    """Test the truncated Picard coefficient sum check."""

    def test_satisfied(self, perturbed_pair, complex_vector):
        """Signed sum ≤ δ^(1/4)‖ℓ‖², absolute sum recorded."""
        report = check_pconv_sum(*perturbed_pair, complex_vector, delta=1e-4)
        assert report.status is BoundStatus.SATISFIED
        assert report.metadata["n_delta"] >= 1
        assert report.metadata["abs_sum"] >= abs(report.lhs)

    def test_zero_perturbation(self, psd_matrix, complex_vector):
        """Identical operators trivially satisfy the bound."""
        report = check_pconv_sum(psd_matrix, psd_matrix, complex_vector)
        assert report.lhs == 0.0
        assert report.satisfied


class TestEigenvectorPhases:
    """Test that reports do not depend on eigenvector phases."""

    def test_reports_unchanged_by_phase_twist(self, complex_vector):
        """Rebuilding A and A^δ from phase-rotated eigenvectors gives the same reports."""
        rng = np.random.default_rng(21)
        gauss = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        basis, _ = np.linalg.qr(gauss)
        values = 0.5 ** np.arange(8)
        twisted = basis * np.exp(2j * np.pi * rng.uniform(size=8))

        a = (basis * values) @ basis.conj().T
        a_twisted = (twisted * values) @ twisted.conj().T
        delta_op = perturb_operator(a, 1e-4, seed=3) - a

        for check in (check_pconv_sum, check_weyl):
            args = (complex_vector,) if check is check_pconv_sum else ()
            first = check(a, a + delta_op, *args)
            second = check(a_twisted, a_twisted + delta_op, *args)
            assert first.status is second.status
            assert first.lhs == pytest.approx(second.lhs, rel=1e-8, abs=1e-12)
            assert first.rhs == pytest.approx(second.rhs, rel=1e-8)

        first = check_projection_bound(a, a + delta_op, 1)
        second = check_projection_bound(a_twisted, a_twisted + delta_op, 1)
        assert first.status is second.status
        assert first.lhs == pytest.approx(second.lhs, rel=1e-6, abs=1e-12)


class TestIndicatorBounds:
    """Test the finite-δ indicator sandwich."""

    @pytest.mark.parametrize(
        "spec",
        [
            FilterSpec(FilterKind.TIKHONOV, alpha=1e-3),
            FilterSpec(FilterKind.GLSM, alpha=1e-2),
            FilterSpec(FilterKind.LANDWEBER, alpha=1e-2),
        ],
        ids=["tikhonov", "glsm", "landweber"],
    )
    def test_lower_and_upper(self, perturbed_pair, complex_vector, spec):
        """Both halves of the sandwich hold."""
        lower, upper = check_indicator_bounds(*perturbed_pair, complex_vector, spec, delta=1e-4)
        assert lower.bound_name == "indicator_lower"
        assert upper.bound_name == "indicator_upper"
        assert lower.satisfied and upper.satisfied
        assert lower.rhs == pytest.approx(upper.lhs)

    def test_identity_filter_rejected(self, perturbed_pair, complex_vector):
        """The identity filter has no C_α."""
        with pytest.raises(FilterBoundError):
            check_indicator_bounds(*perturbed_pair, complex_vector, FilterSpec.identity())


class TestRunSweep:
    """Test the sweep driver."""

    def test_all_satisfied_and_reproducible(self):
        """A small sweep reports no violations and replays identically."""
        first = run_sweep([4, 6], [1e-2, 1e-4], trials=3, seed=11)
        second = run_sweep([4, 6], [1e-2, 1e-4], trials=3, seed=11)
        assert all(r.satisfied for r in first)
        assert [format_report_line(r) for r in first] == [format_report_line(r) for r in second]

    def test_reports_carry_replay_metadata(self):
        """Every report records dim and seed."""
        reports = run_sweep([5], [1e-3], trials=2, seed=0)
        assert {r.metadata["dim"] for r in reports} == {5}
        assert len({r.metadata["seed"] for r in reports}) == 2
        names = {r.bound_name for r in reports}
        assert {"weyl", "eigenvalue_shift", "projection", "pconv_sum"} <= names

    def test_trials_must_be_positive(self):
        """trials ≥ 1."""
        with pytest.raises(DomainError):
            run_sweep([4], [1e-2], trials=0)


class TestFormatReportLine:
    """Test report serialization."""

    def test_layout(self):
        """name lhs rhs satisfied status then sorted metadata."""
        report = BoundReport.compare("weyl", 0.5, 1.0, seed=3, dim=8)
        assert format_report_line(report) == "weyl 0.5 1 true status=satisfied dim=8 seed=3"

    def test_skipped_reason_has_no_spaces(self):
        """Free-text metadata stays a single token."""
        line = format_report_line(BoundReport.skipped("projection", "gap too small"))
        assert line.split()[-1] == "reason=gap_too_small"
        assert line.startswith("projection nan nan true status=skipped")
