from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.core.problem import BoxSet, QuadraticForm, SQCQPProblem
from src.exceptions import OracleScaleExceeded
from src.oracle.brute_force import brute_force_solve, restricted_solve
from src.projection.operators import SupportSet
from tests.helpers import least_squares_to


def _scalar(Q: float, q: float, c: float = 0.0, box=(-2.0, 2.0), **constraints) -> SQCQPProblem:
    return SQCQPProblem(
        objective=QuadraticForm(Q=np.array([[Q]]), q=np.array([q]), c=c),
        box=BoxSet.uniform(1, *box),
        s=1,
        **constraints,
    )


class TestRestrictedSolve:
    def test_unconstrained_minimum_at_zero(self):
        sol = restricted_solve(_scalar(1.0, 0.0), SupportSet.of([0]))
        assert sol.feasible
        assert sol.value == pytest.approx(0.0, abs=1e-10)
        assert sol.x[0] == pytest.approx(0.0, abs=1e-5)

    def test_clamped_minimizer(self):
        # 1/2 (x - 5)^2 on [-2, 2]
        sol = restricted_solve(_scalar(1.0, -5.0, 12.5), SupportSet.of([0]))
        assert sol.x[0] == pytest.approx(2.0, abs=1e-9)
        assert sol.value == pytest.approx(4.5, abs=1e-8)

    def test_active_linear_constraint(self):
        p = _scalar(1.0, 0.0, A=np.array([[1.0]]), b=np.array([-1.0]))
        sol = restricted_solve(p, SupportSet.of([0]))
        assert sol.feasible
        assert sol.x[0] == pytest.approx(-1.0, abs=1e-3)
        assert sol.value == pytest.approx(0.5, abs=1e-3)

    def test_support_too_large(self):
        p = least_squares_to(np.ones(4), s=4)
        with pytest.raises(OracleScaleExceeded):
            restricted_solve(p, SupportSet.of([0, 1, 2, 3]))


class TestBruteForceSolve:
    def test_picks_best_support(self):
        p = least_squares_to([2.0, 1.0], box=BoxSet.uniform(2, -10.0, 10.0))
        result = brute_force_solve(p)
        assert result.best_support.to_list() == [0]
        assert_allclose(result.best_x, [2.0, 0.0], atol=1e-8)
        assert result.best_value == pytest.approx(0.5, abs=1e-8)
        values = {tuple(r.support.to_list()): r.value for r in result.per_support}
        assert values[(1,)] == pytest.approx(2.0, abs=1e-8)

    def test_unbounded_box_is_capped(self, two_point):
        result = brute_force_solve(two_point)
        assert result.best_value == pytest.approx(0.5, abs=1e-8)

    def test_infeasible_instance(self):
        # x >= 1 with x <= 0.5
        p = _scalar(1.0, 0.0, box=(-1.0, 0.5), A=np.array([[-1.0]]), b=np.array([-1.0]))
        result = brute_force_solve(p)
        assert not result.feasible
        assert result.best_support is None
        assert result.best_value == np.inf

    def test_full_support_equals_restricted_solve(self):
        p = least_squares_to([0.5, -0.25, 1.0], box=BoxSet.uniform(3, -1.0, 1.0), s=3)
        result = brute_force_solve(p)
        assert len(result.per_support) == 1
        direct = restricted_solve(p, SupportSet.of([0, 1, 2]))
        assert result.best_value == pytest.approx(direct.value)
        assert result.best_value == pytest.approx(0.0, abs=1e-10)

    def test_scale_limits(self):
        with pytest.raises(OracleScaleExceeded):
            brute_force_solve(least_squares_to(np.ones(9), s=2))
        with pytest.raises(OracleScaleExceeded):
            brute_force_solve(least_squares_to(np.ones(6), s=4))

    def test_matches_constrained_sparse_minimizer(self, tiny_constrained):
        result = brute_force_solve(tiny_constrained)
        assert result.best_support.to_list() == [0, 1]
        assert result.best_value == pytest.approx(0.02, abs=1e-8)
