from __future__ import annotations

import numpy as np
import pytest

from src.config import SolverConfig, build_solver_config
from src.core.problem import BoxSet, QuadraticForm, SQCQPProblem
from tests.helpers import least_squares_to


@pytest.fixture
def config() -> SolverConfig:
    return build_solver_config(tau=1.0)


@pytest.fixture
def quad_1d() -> SQCQPProblem:
    """f_0 = 1/2 x^2 - x on the real line, s = 1."""
    return SQCQPProblem(objective=QuadraticForm(Q=np.array([[1.0]]), q=np.array([-1.0])), box=BoxSet.free(1), s=1)


@pytest.fixture
def two_point() -> SQCQPProblem:
    """f_0 = 1/2 ||x - (2, 1)||^2, s = 1; the sparse minimizer is (2, 0)."""
    return least_squares_to([2.0, 1.0])


@pytest.fixture
def tiny_constrained() -> SQCQPProblem:
    """n = 3, s = 2, one ball constraint and one half-space, both inactive at
    the sparse minimizer (1.5, -1, 0)."""
    return least_squares_to(
        [1.5, -1.0, 0.2],
        box=BoxSet.uniform(3, -3.0, 3.0),
        s=2,
        quad_constraints=(QuadraticForm(Q=np.eye(3), q=np.zeros(3), c=-2.0),),
        A=np.array([[1.0, 1.0, 0.0]]),
        b=np.array([2.0]),
    )


@pytest.fixture
def random_instance() -> SQCQPProblem:
    """Dense instance with every constraint family, for derivative checks."""
    rng = np.random.default_rng(7)
    n = 6

    def spd() -> np.ndarray:
        P = rng.standard_normal((n, n))
        return P.T @ P + 0.1 * np.eye(n)

    return SQCQPProblem(
        objective=QuadraticForm(Q=spd(), q=rng.standard_normal(n), c=0.3),
        quad_constraints=(
            QuadraticForm(Q=spd(), q=rng.standard_normal(n), c=-1.0),
            QuadraticForm(Q=spd(), q=rng.standard_normal(n), c=-2.0),
        ),
        A=rng.standard_normal((2, n)),
        b=rng.standard_normal(2),
        A_eq=rng.standard_normal((1, n)),
        b_eq=rng.standard_normal(1),
        box=BoxSet.uniform(n, -10.0, 10.0),
        s=3,
    )
