import math

import numpy as np
import numpy.testing as npt
import pytest

from locact import linsys, nonlinear
from locact.errors import (
    DimensionMismatch,
    NoConvergence,
    NoSignChange,
    NotAnEquilibrium,
    StageError,
)
from locact.nonlinear import (
    analyze_equilibrium_pipeline,
    discrete_laplacian,
    fhn_equilibrium_guesses,
    fhn_system,
    find_equilibrium,
    hopf_locate,
    jacobian_fd,
    linearize_at,
    rd_single_cell,
)

BETA, GAMMA, XI = 1.28, 0.12, 0.1


def fhn_equilibrium_oracle(mu):
    """x_d from the cubic x^3 - 3(1 - mu - 1/beta)x + 3 gamma/beta = 0,
    y_d = (x_d + gamma)/beta; independent of the Newton path."""
    roots = np.roots([1.0, 0.0, -3.0 * (1.0 - mu - 1.0 / BETA), 3.0 * GAMMA / BETA])
    real = [r.real for r in roots if abs(r.imag) < 1e-9]
    assert len(real) == 1
    x = real[0]
    return np.array([x, (x + GAMMA) / BETA])


class TestJacobianFd:
    def test_linear_map_recovered(self, rng):
        M = rng.standard_normal((3, 3))
        J = jacobian_fd(lambda x: M @ x, rng.standard_normal(3))
        npt.assert_allclose(J, M, atol=1e-8)

    def test_fhn_kinetic_jacobian_at_origin(self):
        sys = fhn_system(0.05, BETA, GAMMA, XI)
        J = jacobian_fd(sys.f, np.zeros(2))
        npt.assert_allclose(J, [[1.0, -1.0], [XI, -XI * BETA]], atol=1e-8)

    def test_zero_step_rejected(self):
        with pytest.raises(ValueError):
            jacobian_fd(lambda x: x, np.zeros(2), h=0.0)

    def test_fd_matches_analytic_on_fhn(self, rng):
        sys = fhn_system(0.05, BETA, GAMMA, XI)
        for _ in range(50):
            x = rng.uniform(-2.0, 2.0, 2)
            fd = jacobian_fd(sys.f, x, h=1e-5)
            analytic = sys.jacobian_f(x)
            assert np.linalg.norm(fd - analytic) <= \
                1e-6 * (1.0 + np.linalg.norm(analytic))


class TestFindEquilibrium:
    def test_fhn_equilibrium_at_mu_005(self):
        sys = fhn_system(0.05, BETA, GAMMA, XI)
        report = find_equilibrium(sys, [-1.0, -0.6])
        npt.assert_allclose(report.x_star, fhn_equilibrium_oracle(0.05), atol=1e-9)
        assert report.residual <= 1e-10
        assert report.stability == "Unstable"  # just past the crossing

    def test_linear_system_equilibrium_is_origin(self, rng):
        A = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
        sys = nonlinear.NonlinearPortSystem(
            f=lambda x: A @ x, D=lambda x: np.zeros(3), P=np.zeros((3, 3)), n=3)
        report = find_equilibrium(sys, rng.standard_normal(3))
        npt.assert_allclose(report.x_star, np.zeros(3), atol=1e-8)

    def test_no_real_root_raises(self):
        sys = nonlinear.NonlinearPortSystem(
            f=lambda x: np.array([x[0] ** 2 + 1.0]), D=lambda x: np.zeros(1),
            P=np.zeros((1, 1)), n=1)
        with pytest.raises(NoConvergence) as info:
            find_equilibrium(sys, [0.5], max_iter=60)
        assert info.value.best_residual > 0.0

    def test_full_jacobian_includes_dissipation(self):
        sys = fhn_system(0.05, BETA, GAMMA, XI)
        report = find_equilibrium(sys, [-1.0, -0.6])
        # full = kinetic - P dD: only the (1,1) entry shifts by -mu
        diff = report.jacobian_kinetic - report.jacobian_full
        npt.assert_allclose(diff, [[0.05, 0.0], [0.0, 0.0]], atol=1e-9)


class TestLinearizeAt:
    def test_fhn_kinetic_linearization(self):
        sys = fhn_system(0.05, BETA, GAMMA, XI)
        report = find_equilibrium(sys, [-1.0, -0.6])
        lin = linearize_at(sys, report.x_star)
        xd = report.x_star[0]
        npt.assert_allclose(lin.A, [[1.0 - xd * xd, -1.0], [XI, -XI * BETA]],
                            atol=1e-9)
        npt.assert_allclose(lin.P, np.diag([1.0, 0.0]))

    def test_linear_field_returned_exactly(self, rng):
        A = rng.standard_normal((2, 2))
        sys = nonlinear.NonlinearPortSystem(
            f=lambda x: A @ x, D=lambda x: np.zeros(2), P=np.eye(2), n=2,
            jacobian_f=lambda x: A)
        lin = linearize_at(sys, np.zeros(2))
        npt.assert_array_equal(lin.A, A)

    def test_non_equilibrium_rejected(self):
        sys = fhn_system(0.05, BETA, GAMMA, XI)
        with pytest.raises(NotAnEquilibrium):
            linearize_at(sys, [5.0, 5.0])


class TestFhnSystem:
    def test_rhs_at_origin(self):
        sys = fhn_system(0.05, BETA, GAMMA, XI)
        g = sys.f(np.zeros(2)) - sys.P @ sys.D(np.zeros(2))
        npt.assert_allclose(g, [0.0, XI * GAMMA], atol=1e-15)  # (0, 0.012)

    def test_mu_zero_removes_dissipation(self):
        sys = fhn_system(0.0, BETA, GAMMA, XI)
        z = np.array([0.7, -0.3])
        npt.assert_allclose(sys.P @ sys.D(z), np.zeros(2))

    def test_default_parameters_stored(self):
        sys = fhn_system(0.05)
        assert sys.params == {"mu": 0.05, "beta": 1.28, "gamma": 0.12, "xi": 0.1}

    def test_cubic_guesses_hit_equilibrium(self):
        guesses = fhn_equilibrium_guesses(0.05, BETA, GAMMA, XI)
        assert len(guesses) == 1
        npt.assert_allclose(guesses[0], fhn_equilibrium_oracle(0.05), atol=1e-9)


class TestHopf:
    def test_fhn_hopf_location(self):
        res = hopf_locate(lambda m: fhn_system(m, BETA, GAMMA, XI),
                          0.0, 0.1, tol=1e-7, x_guess=[-1.0, -0.6])
        assert 0.045 <= res.mu_star <= 0.055
        assert res.is_hopf
        # at the crossing the trace vanishes: 1 - x_d^2 - mu = xi * beta
        xd = res.equilibrium[0]
        assert 1.0 - xd * xd - res.mu_star == pytest.approx(XI * BETA, abs=1e-5)
        # the paper's Example-8 equilibrium is the Hopf-point equilibrium
        npt.assert_allclose(res.equilibrium, [-0.9083, -0.6159], atol=1e-3)

    def test_no_sign_change_detected(self):
        with pytest.raises(NoSignChange):
            hopf_locate(lambda m: fhn_system(m, BETA, GAMMA, XI),
                        0.2, 0.3, tol=1e-6, x_guess=[-0.8, -0.5])

    def test_degenerate_interval_rejected(self):
        with pytest.raises(NoSignChange):
            hopf_locate(lambda m: fhn_system(m), 0.05, 0.05)


class TestDiscreteLaplacian:
    def test_single_cell_dirichlet(self):
        npt.assert_array_equal(discrete_laplacian(1, "dirichlet"), [[-4.0]])

    def test_toroidal_rows_sum_to_zero(self):
        for N in (1, 2, 3, 5):
            L = discrete_laplacian(N, "toroidal")
            npt.assert_allclose(L.sum(axis=1), 0.0, atol=1e-14)

    def test_two_by_two_dirichlet_row_sums(self):
        L = discrete_laplacian(2, "dirichlet")
        npt.assert_array_equal(np.diag(L), [-4.0] * 4)
        npt.assert_allclose(L.sum(axis=1), -2.0)  # each node has 2 neighbors

    def test_symmetric_for_all_boundaries(self):
        for boundary in ("dirichlet", "neumann", "toroidal"):
            L = discrete_laplacian(3, boundary)
            npt.assert_array_equal(L, L.T)

    def test_dirichlet_spectrum_in_gershgorin_band(self):
        for N in (1, 2, 4):
            vals = np.linalg.eigvalsh(discrete_laplacian(N, "dirichlet"))
            assert np.all(vals >= -8.0 - 1e-12)
            assert np.all(vals < 0.0)

    def test_neumann_rows_sum_to_zero(self):
        L = discrete_laplacian(3, "neumann")
        npt.assert_allclose(L.sum(axis=1), 0.0, atol=1e-14)


class TestRdSingleCell:
    def test_pure_decay_from_diffusion(self):
        # m = n = 1, no kinetics, D = mu / 4: x' = -mu x
        mu = 0.2
        cell = rd_single_cell(lambda x: np.zeros(1), lambda x: np.zeros(0),
                              [mu / 4.0], 1, 1)
        g = cell.f(np.array([2.0])) - cell.P @ cell.D(np.array([2.0]))
        assert g[0] == pytest.approx(-mu * 2.0)

    def test_fhn_kinetics_reduction_matches_fhn_system(self):
        mu = 0.05
        full = fhn_system(mu, BETA, GAMMA, XI)
        cell = rd_single_cell(lambda x: np.asarray(full.f(x))[:1],
                              lambda x: np.asarray(full.f(x))[1:],
                              [mu / 4.0], 1, 2)
        z = np.array([-0.9, -0.6])
        lhs = cell.f(z) - cell.P @ cell.D(z)
        rhs = full.f(z) - full.P @ full.D(z)
        npt.assert_allclose(lhs, rhs, atol=1e-14)

    def test_wrong_coefficient_count_rejected(self):
        with pytest.raises(DimensionMismatch):
            rd_single_cell(lambda x: np.zeros(2), lambda x: np.zeros(0),
                           [0.1], 2, 2)

    def test_m_exceeding_n_rejected(self):
        with pytest.raises(DimensionMismatch):
            rd_single_cell(lambda x: np.zeros(3), lambda x: np.zeros(0),
                           [0.1, 0.1, 0.1], 3, 2)


class TestPipeline:
    def test_fhn_pipeline_at_mu_005(self):
        sys = fhn_system(0.05, BETA, GAMMA, XI)
        report = analyze_equilibrium_pipeline(sys, [-1.0, -0.6])
        npt.assert_allclose(report["equilibrium"]["x_star"],
                            fhn_equilibrium_oracle(0.05), atol=1e-8)
        assert report["activity"]["status"] == "Active"
        assert report["edge_of_chaos"]["edge_of_chaos"] is True
        assert report["genericity"] is not None

    def test_dissipation_induced_destabilization(self):
        # stable kinetics A, dissipative coupling -D, unstable full Jacobian
        A = np.array([[-1.0, 10.0], [0.0, -2.0]])
        D = np.array([[1.0, -1.0], [-1.0, 1.0]])
        assert linsys.max_sym_eigenvalue(-D) <= 1e-12  # -D is dissipative
        sys = nonlinear.NonlinearPortSystem(
            f=lambda x: A @ x, D=lambda x: D @ x, P=np.eye(2), n=2,
            jacobian_f=lambda x: A, jacobian_D=lambda x: D)
        report = analyze_equilibrium_pipeline(sys, [0.3, -0.2])
        npt.assert_allclose(report["equilibrium"]["x_star"], [0.0, 0.0], atol=1e-9)
        assert report["jacobians"]["max_re_eig_kinetic"] < 0.0
        assert report["jacobians"]["max_re_eig_full"] == pytest.approx(
            (-5.0 + math.sqrt(45.0)) / 2.0, abs=1e-9)
        assert report["equilibrium"]["stability"] == "Unstable"
        assert report["activity"]["status"] == "Active"

    def test_stage_label_propagates(self):
        sys = nonlinear.NonlinearPortSystem(
            f=lambda x: np.array([x[0] ** 2 + 1.0]), D=lambda x: np.zeros(1),
            P=np.zeros((1, 1)), n=1)
        with pytest.raises(StageError) as info:
            analyze_equilibrium_pipeline(sys, [0.0])
        assert info.value.stage == "find_equilibrium"

    def test_pipeline_matches_direct_classification_for_linear_field(self, rng):
        A = rng.uniform(-2.0, 2.0, (2, 2))
        sys = nonlinear.NonlinearPortSystem(
            f=lambda x: A @ x, D=lambda x: np.zeros(2), P=np.eye(2), n=2,
            jacobian_f=lambda x: A)
        report = analyze_equilibrium_pipeline(sys, [0.1, 0.1])
        from locact.activity import classify_activity
        direct = classify_activity(linsys.make_system(A, np.eye(2)))
        assert report["activity"]["status"] == direct.status
