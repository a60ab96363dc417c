import numpy as np
import pytest
import scipy.linalg

from conftest import STABLE_PERIOD, TRUE_TABLE

from logkg import WaveParams
from logkg.errors import (
    AmbiguousZero,
    ConstraintDegenerate,
    DegenerateTurningPoint,
    PoleAtOne,
    ValidationError,
)
from logkg.model import PeriodicProfile, periodic_trapezoid
from logkg.spectral import (
    MatrixKind,
    MatrixOperator,
    beta_minimum,
    block_matrix,
    constrained_minimum,
    eigenvalue_map_gamma,
    floquet_theta,
    gamma_minimum,
    hill_eigenvalues,
    hill_im,
    hill_matrix,
    hill_re,
    hill_report,
    inertial_index,
    kappa_minimum,
    lambda0_closed_form,
    matrix_operator_eigenvalues,
    solve_mn,
)
from logkg.stability import d_second_derivative
from logkg.standing_waves import continue_branch, shoot_wave


class TestHillEigenvalues:
    def test_im_ground_state_is_zero(self, profile_p1_c05):
        vals = hill_eigenvalues(hill_im(profile_p1_c05), 3)
        assert abs(vals[0]) < 1e-8
        assert vals[1] > 0.1

    def test_re_known_eigenvalues(self, profile_p1_c05):
        vals = hill_eigenvalues(hill_re(profile_p1_c05), 3)
        # the wave itself is an eigenfunction at -p; its derivative at 0
        assert vals[0] == pytest.approx(-1.0, abs=1e-8)
        assert abs(vals[1]) < 1e-8

    def test_eigenfunction_residuals(self, profile_p1_c05):
        prof = profile_p1_c05
        A = hill_matrix(hill_re(prof))
        r1 = np.linalg.norm(A @ prof.phi + prof.p * prof.phi) / np.linalg.norm(prof.phi)
        r2 = np.linalg.norm(A @ prof.dphi) / np.linalg.norm(prof.dphi)
        assert r1 < 1e-6 and r2 < 1e-6

    def test_mode_doubling_stability(self, profile_p1_c05):
        # spectral accuracy: doubling the mode count moves nothing by 1e-8
        op = hill_re(profile_p1_c05)
        v128 = hill_eigenvalues(op, 5, modes=128)
        v256 = hill_eigenvalues(op, 5, modes=256)
        assert np.max(np.abs(v128 - v256)) < 1e-8

    def test_modes_floor(self, profile_p1_c05):
        with pytest.raises(ValidationError):
            hill_eigenvalues(hill_re(profile_p1_c05), 40, modes=64)


class TestFloquet:
    @pytest.mark.parametrize("p", sorted(TRUE_TABLE))
    def test_true_rows(self, p, table_profiles):
        L0, ddphi0, ybar0, ybarL, dybarL, theta = TRUE_TABLE[p]
        rep = floquet_theta(table_profiles[p])
        row = rep.theta_table_row
        assert row.period == pytest.approx(L0, rel=1e-9)
        assert row.ddphi0 == pytest.approx(ddphi0, rel=1e-12)
        assert row.ybar0 == pytest.approx(ybar0, rel=1e-12)
        assert row.ybarL == pytest.approx(ybarL, rel=1e-7)
        assert row.dybarL == pytest.approx(dybarL, abs=1e-7)
        assert rep.theta == pytest.approx(theta, rel=1e-6)
        assert rep.theta < 0.0

    @pytest.mark.parametrize("p", sorted(TRUE_TABLE))
    def test_periodicity_consistency(self, p, table_profiles):
        # ybar(L) = ybar(0) because the periodic partner vanishes at 0
        rep = floquet_theta(table_profiles[p])
        row = rep.theta_table_row
        assert row.ybarL == pytest.approx(row.ybar0, rel=1e-6)

    def test_both_quotients_reported(self, profile_p1_c05):
        rep = floquet_theta(profile_p1_c05)
        row = rep.theta_table_row
        assert rep.theta == pytest.approx(row.dybarL / row.ddphi0, rel=1e-14)
        assert rep.theta_from_value == pytest.approx(row.ybarL / row.ddphi0, rel=1e-14)
        # the two quotients differ grossly; only the derivative form is
        # consistent with ybar(L) = ybar(0)
        assert abs(rep.theta_from_value - rep.theta) > 1.0

    def test_degenerate_turning_point(self, profile_p1_c05):
        params = profile_p1_c05.params
        fake = PeriodicProfile(
            params=params,
            grid=profile_p1_c05.grid,
            phi=profile_p1_c05.phi,
            dphi=profile_p1_c05.dphi,
            amplitude=params.center_amplitude,  # phi''(0) = 0 there
            period=profile_p1_c05.period,
        )
        with pytest.raises(DegenerateTurningPoint):
            floquet_theta(fake)


class TestInertialIndex:
    @pytest.mark.parametrize("p", sorted(TRUE_TABLE))
    def test_table_rows(self, p, table_profiles):
        prof = table_profiles[p]
        assert inertial_index(hill_re(prof)) == (1, 1)
        assert inertial_index(hill_im(prof)) == (0, 1)

    def test_isoinertial_along_branch(self):
        branch = continue_branch(1, 0.6, STABLE_PERIOD, 0.05, 11, 128)
        for prof in branch.profiles:
            assert inertial_index(hill_re(prof), check_floquet=False) == (1, 1)
            assert inertial_index(hill_im(prof)) == (0, 1)

    def test_guard_band(self, profile_p1_c05):
        # third eigenvalue of the re operator sits near 0.024; a tolerance
        # of 0.02 puts it inside the [tol, 2 tol) band
        with pytest.raises(AmbiguousZero):
            inertial_index(hill_re(profile_p1_c05), zero_tolerance=0.02,
                           check_floquet=False)


class TestEigenvalueMap:
    def test_fixed_points(self):
        assert eigenvalue_map_gamma(0.0, 0.7) == 0.0
        assert eigenvalue_map_gamma(-0.3, 0.0) == pytest.approx(-0.3)

    def test_pole(self):
        with pytest.raises(PoleAtOne):
            eigenvalue_map_gamma(1.0, 0.5)

    def test_lambda0_maps_to_minus_p(self):
        for p, c in ((1, 0.5), (2, 0.7), (3, 0.9)):
            lam0, _ = lambda0_closed_form(p, c)
            assert eigenvalue_map_gamma(lam0, c) == pytest.approx(-p, rel=1e-12)

    def test_nonpositive_block_eigenvalues_map_onto_hill(self, profile_p1_c05):
        prof = profile_p1_c05
        block = matrix_operator_eigenvalues(MatrixOperator(MatrixKind.RE, prof), 4)
        hill = hill_eigenvalues(hill_re(prof), 6)
        for lam in block[block <= 1e-8]:
            mapped = eigenvalue_map_gamma(float(lam), prof.c)
            assert np.min(np.abs(hill - mapped)) < 1e-6


class TestLambda0:
    def test_reference_value(self):
        lam0, companion = lambda0_closed_form(1, 0.5)
        assert lam0 == pytest.approx(-0.8827822185373186, rel=1e-15)
        assert companion == pytest.approx(-0.5 / (lam0 - 1.0), rel=1e-15)

    def test_zero_frequency_reduces_to_hill(self):
        lam0, companion = lambda0_closed_form(1, 0.0)
        assert lam0 == -1.0
        assert companion == 0.0

    def test_matches_block_discretization(self, profile_p1_c05):
        lam0, _ = lambda0_closed_form(1, 0.5)
        vals = matrix_operator_eigenvalues(
            MatrixOperator(MatrixKind.RE, profile_p1_c05), 1, modes=256)
        assert vals[0] == pytest.approx(lam0, abs=1e-6)

    def test_closed_form_eigenvector(self, profile_p1_c05):
        # (phi, m*phi) is annihilated by (B_re - lam0)
        prof = profile_p1_c05
        lam0, m = lambda0_closed_form(prof.p, prof.c)
        M = block_matrix(MatrixOperator(MatrixKind.RE, prof))
        vec = np.concatenate([prof.phi, m * prof.phi])
        res = np.linalg.norm(M @ vec - lam0 * vec) / np.linalg.norm(vec)
        assert res < 1e-6


class TestBlockOperators:
    def test_re_negative_count_and_kernel(self, profile_p1_c05):
        prof = profile_p1_c05
        M = block_matrix(MatrixOperator(MatrixKind.RE, prof))
        vals, vecs = scipy.linalg.eigh(M)
        assert np.sum(vals < -1e-6) == 1
        izero = int(np.argmin(np.abs(vals)))
        assert abs(vals[izero]) < 1e-6
        kernel = np.concatenate([prof.dphi, prof.c * prof.dphi])
        cos = abs(vecs[:, izero] @ kernel) / np.linalg.norm(kernel)
        assert cos > 1.0 - 1e-6

    def test_im_nonnegative_and_kernel(self, profile_p1_c05):
        prof = profile_p1_c05
        M = block_matrix(MatrixOperator(MatrixKind.IM, prof))
        vals, vecs = scipy.linalg.eigh(M)
        assert np.sum(vals < -1e-6) == 0
        izero = int(np.argmin(np.abs(vals)))
        kernel = np.concatenate([prof.phi, -prof.c * prof.phi])
        cos = abs(vecs[:, izero] @ kernel) / np.linalg.norm(kernel)
        assert cos > 1.0 - 1e-6

    def test_kernel_residuals(self, profile_p1_c05):
        prof = profile_p1_c05
        MR = block_matrix(MatrixOperator(MatrixKind.RE, prof))
        MI = block_matrix(MatrixOperator(MatrixKind.IM, prof))
        kr = np.concatenate([prof.dphi, prof.c * prof.dphi])
        ki = np.concatenate([prof.phi, -prof.c * prof.phi])
        assert np.linalg.norm(MR @ kr) < 1e-6 * np.linalg.norm(kr)
        assert np.linalg.norm(MI @ ki) < 1e-6 * np.linalg.norm(ki)

    def test_zero_frequency_decoupling(self):
        # at c = 0 the block spectrum is the scalar spectrum plus {1}
        prof = shoot_wave(WaveParams(1, 0.0), 3.5, 128).profile
        block = matrix_operator_eigenvalues(MatrixOperator(MatrixKind.RE, prof), 4)
        hill = hill_eigenvalues(hill_re(prof), 4)
        for lam in block:
            dist = min(np.min(np.abs(hill - lam)), abs(lam - 1.0))
            assert dist < 1e-8

    def test_block_mode_doubling(self, profile_p1_c05):
        op = MatrixOperator(MatrixKind.RE, profile_p1_c05)
        v128 = matrix_operator_eigenvalues(op, 4, modes=128)
        v256 = matrix_operator_eigenvalues(op, 4, modes=256)
        assert np.max(np.abs(v128 - v256)) < 1e-8


class TestConstrainedMinima:
    def test_beta_gamma_kappa_stable_point(self, stable_profile):
        assert beta_minimum(stable_profile) > 1e-4
        assert abs(gamma_minimum(stable_profile)) < 1e-6
        assert kappa_minimum(stable_profile) > 1e-4

    def test_degenerate_constraints(self, stable_profile):
        op = MatrixOperator(MatrixKind.RE, stable_profile)
        v = np.concatenate([stable_profile.phi, stable_profile.phi])
        with pytest.raises(ConstraintDegenerate):
            constrained_minimum(op, [v, 2.0 * v])
        with pytest.raises(ValidationError):
            constrained_minimum(op, [])

    def test_minimum_decreases_with_fewer_constraints(self, stable_profile):
        # dropping the translation constraint exposes the kernel: gamma <= kappa
        assert gamma_minimum(stable_profile) <= kappa_minimum(stable_profile)


class TestSolveMN:
    def test_inner_product_equals_minus_d2(self, stable_profile):
        prof = stable_profile
        M, N = solve_mn(prof)
        grid = prof.grid
        inner = periodic_trapezoid(prof.c * prof.phi * M + prof.phi * N, grid)
        d2 = d_second_derivative(prof)
        assert inner == pytest.approx(-d2, rel=1e-4)
        assert inner < 0.0  # d'' > 0 in the stable window

    def test_first_component_is_frequency_derivative(self, stable_branch):
        mid = len(stable_branch) // 2
        prof = stable_branch.profiles[mid]
        cs = [q.c for q in stable_branch.params_list]
        step = cs[mid + 1] - cs[mid]
        fd = (stable_branch.profiles[mid + 1].phi
              - stable_branch.profiles[mid - 1].phi) / (2.0 * step)
        M, N = solve_mn(prof)
        rel = np.linalg.norm(M - fd) / np.linalg.norm(fd)
        assert rel < 1e-3
        rel_n = np.linalg.norm(N - (prof.phi + prof.c * M)) / np.linalg.norm(prof.phi)
        assert rel_n < 1e-10

    def test_zero_frequency(self):
        prof = shoot_wave(WaveParams(1, 0.0), 3.5, 128).profile
        M, N = solve_mn(prof)
        assert np.linalg.norm(M) < 1e-10
        assert np.linalg.norm(N - prof.phi) < 1e-10 * np.linalg.norm(prof.phi)


class TestHillReport:
    def test_full_record(self, profile_p1_c05):
        rep = hill_report(hill_re(profile_p1_c05), m=6)
        assert rep.n_negative == 1 and rep.n_zero == 1
        assert len(rep.eigenvalues) == 6
        assert rep.theta == pytest.approx(TRUE_TABLE[1][5], rel=1e-6)
        assert rep.theta_table_row is not None
        im = hill_report(hill_im(profile_p1_c05), m=6)
        assert im.n_negative == 0 and im.n_zero == 1
        assert np.isnan(im.theta)
