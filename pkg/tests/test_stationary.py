from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.core.problem import QuadraticForm
from src.exceptions import DimensionMismatch
from src.oracle.brute_force import brute_force_solve
from src.projection.operators import SupportSet
from src.stationary.equations import BLOCK_ORDER, assemble_F, merit, verify_p_stationarity
from tests.helpers import least_squares_to, point


class TestAssembleF:
    def test_zero_at_unconstrained_minimizer(self, quad_1d):
        F = assemble_F(quad_1d, point(quad_1d, [1.0]), SupportSet.of([0]))
        assert F.norm() == 0.0
        assert len(F) == quad_1d.p_dim

    def test_zero_at_sparse_stationary_point(self, two_point):
        F = assemble_F(two_point, point(two_point, [2.0, 0.0]), SupportSet.of([0]))
        assert F.norm() == pytest.approx(0.0, abs=1e-14)

    def test_block_layout(self, random_instance):
        p = random_instance
        rng = np.random.default_rng(0)
        Y = point(p, rng.standard_normal(p.n), nu=rng.standard_normal(p.n), mu=[0.1, 0.2], lam=[0.3, 0.4], zeta=[1.0])
        T = SupportSet.of([0, 2, 4])
        F = assemble_F(p, Y, T)
        sizes = [getattr(F, name).shape[0] for name in BLOCK_ORDER]
        assert sizes == [3, 3, 3, 3, 2, 2, 1]
        assert F.vector.shape == (p.p_dim,)
        assert F.k_rows.shape == (p.q_dim,)
        assert_allclose(F.x_comp, Y.x[[1, 3, 5]])
        assert_allclose(F.nu_comp, Y.nu[[1, 3, 5]])

    def test_support_size_checked(self, two_point):
        with pytest.raises(DimensionMismatch):
            assemble_F(two_point, point(two_point, [2.0, 0.0]), SupportSet.of([0, 1]))

    def test_oracle_point_with_fitted_multipliers(self, tiny_constrained):
        # both constraints are inactive at the oracle minimizer, so zero
        # multipliers are the least-squares fit on the (empty) active set
        p = tiny_constrained
        oracle = brute_force_solve(p)
        T = oracle.best_support
        assert T.to_list() == [0, 1]
        F = assemble_F(p, point(p, oracle.best_x), T)
        assert F.norm() <= 1e-6

    def test_lipschitz_on_fixed_support(self, random_instance):
        # bound for points with every coordinate in [-1, 1]
        p = random_instance
        norm = np.linalg.norm
        quad = sum(norm(f.Q, 2) * (1.0 + np.sqrt(p.n)) + norm(f.q) for f in p.quad_constraints)
        L = 12.0 * (1.0 + norm(p.objective.Q, 2) + quad + norm(p.A, 2) + norm(p.A_eq, 2))
        T = SupportSet.of([0, 2, 4])
        rng = np.random.default_rng(5)

        def draw():
            return [rng.uniform(-1.0, 1.0, size) for size in (p.n, p.n, p.k, p.m, p.m_eq)]

        for _ in range(50):
            first, second = draw(), draw()
            if rng.uniform() < 0.5:
                second = [a + 1e-4 * (b - a) for a, b in zip(first, second)]
            gap = norm(np.concatenate([a - b for a, b in zip(first, second)]))
            change = norm(assemble_F(p, point(p, *first), T).vector - assemble_F(p, point(p, *second), T).vector)
            assert change <= L * gap


class TestMerit:
    def test_zero_residual(self, quad_1d):
        assert merit(quad_1d, point(quad_1d, [1.0]), SupportSet.of([0])) == 0.0

    def test_half_squared_norm(self):
        # F = (grad, proj, x_comp, nu_comp) = (-3, 0, 4, 0) at x = (-1, 4) with T = {0}
        p = least_squares_to([2.0, 0.0])
        assert merit(p, point(p, [-1.0, 4.0]), SupportSet.of([0])) == pytest.approx(12.5)


class TestVerifyPStationarity:
    def test_passes_below_threshold(self, two_point):
        report = verify_p_stationarity(two_point, point(two_point, [2.0, 0.0]), 1.0, 1e-8)
        assert report.passed
        assert report.which == "none"
        assert report.to_dict()["pass"] is True

    def test_fails_strict_tau_inequality(self, two_point):
        report = verify_p_stationarity(two_point, point(two_point, [2.0, 0.0]), 3.0, 1e-8)
        assert not report.passed
        assert report.which == "tau-strict-inequality"
        assert report.worst_violation == pytest.approx(1.0)

    def test_negative_multiplier_fails_phi(self):
        p = least_squares_to([2.0, 1.0], quad_constraints=(QuadraticForm(Q=np.zeros((2, 2)), q=np.zeros(2), c=-8.0),))
        report = verify_p_stationarity(p, point(p, [2.0, 0.0], mu=[-1.0]), 1.0, 1e-8)
        assert not report.passed
        assert report.which == "phi"
        assert report.checks["phi"] == pytest.approx(np.sqrt(65.0) - 7.0)

    def test_zero_point_fails_gradient(self, two_point):
        report = verify_p_stationarity(two_point, point(two_point, [0.0, 0.0]), 1.0, 1e-6)
        assert not report.passed
        assert report.which == "gradient-off-support"

    def test_too_many_nonzeros(self, two_point):
        report = verify_p_stationarity(two_point, point(two_point, [1.0, 1.0]), 1.0, 1e-6)
        assert not report.passed
        assert report.which == "sparsity-violated"

    def test_nonzero_nu_off_support(self, two_point):
        report = verify_p_stationarity(two_point, point(two_point, [2.0, 0.0], nu=[0.0, 0.5]), 1.0, 1e-8)
        assert report.which == "nu-off-support"
