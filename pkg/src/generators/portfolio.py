"""Sparse portfolio selection.

    min  <x, (Q + Q_1) x>
    s.t. <x, Q_1 x> <= sigma_0,  <a_1, x> >= r_0,  <1, x> = 1,
         0 <= x <= 0.3,  ||x||_0 <= s

Quadratic forms are stored with a factor 2 so that 1/2 x'(2M)x = <x, M x>.
"""

from __future__ import annotations

import numpy as np
import structlog

from src.core.problem import BoxSet, QuadraticForm, SQCQPProblem
from src.exceptions import BadDimensions
from src.generators.bundle import InstanceBundle, streams

logger = structlog.get_logger(__name__)

RISK_LEVEL = 0.001
RETURN_LEVEL = 0.002
WEIGHT_CAP = 0.3
ENTRY_SCALE = 0.01
RETURN_STD = 0.5
# sum x = 1 with x_i <= 0.3 needs at least four holdings
MIN_HOLDINGS = 4


def portfolio_problem(factor: np.ndarray, specific: np.ndarray, returns: np.ndarray, s: int) -> SQCQPProblem:
    n = returns.shape[0]
    Q1 = np.diag(specific)
    return SQCQPProblem(
        objective=QuadraticForm(Q=2.0 * (factor + Q1), q=np.zeros(n)),
        quad_constraints=(QuadraticForm(Q=2.0 * Q1, q=np.zeros(n), c=-RISK_LEVEL),),
        A=-returns.reshape(1, n),
        b=np.array([-RETURN_LEVEL]),
        A_eq=np.ones((1, n)),
        b_eq=np.ones(1),
        box=BoxSet.uniform(n, 0.0, WEIGHT_CAP),
        s=s,
    )


def gen_sps_synthetic(n: int, s: int, seed: int) -> InstanceBundle:
    """Factor risk D'D with D (n/4 x n) ~ U[0, 0.01], specific risk diag ~ U[0, 0.01],
    returns ~ N(0, 0.5^2). Streams: D, specific risk, returns."""
    if n < 4 or n % 4:
        raise BadDimensions(f"n must be a positive multiple of 4, got {n}")
    if s < MIN_HOLDINGS or s > n:
        raise BadDimensions(f"s = {s} outside [{MIN_HOLDINGS}, {n}]; weights capped at {WEIGHT_CAP} need s >= 4")
    rng_D, rng_specific, rng_returns = streams(seed, 3)

    D = rng_D.uniform(0.0, ENTRY_SCALE, (n // 4, n))
    specific = rng_specific.uniform(0.0, ENTRY_SCALE, n)
    returns = rng_returns.normal(0.0, RETURN_STD, n)

    logger.debug("instance_generated", family="sps-synth", n=n, s=s, seed=seed)
    return InstanceBundle(
        problem=portfolio_problem(D.T @ D, specific, returns, s),
        family="sps-synth",
        seed=seed,
        recommended_tau=1.0,
        meta={"risk_level": RISK_LEVEL, "return_level": RETURN_LEVEL, "weight_cap": WEIGHT_CAP},
    )
