"""Sparse recovery instances with a planted ground truth.

Random draws use one child stream per matrix, spawned from the seed in the
order documented on each generator.
"""

from __future__ import annotations

import math

import numpy as np
import structlog

from src.core.problem import BoxSet, QuadraticForm, SQCQPProblem
from src.exceptions import BadDimensions
from src.generators.bundle import InstanceBundle, check_ground_truth, streams

logger = structlog.get_logger(__name__)

BOX_KINDS = ("free", "box22", "nonneg")
# planted entries stay clear of the [-2, 2] bounds
BOX22_MARGIN = 1.99
QUAD_RIDGE = 0.01


def _least_squares_objective(D: np.ndarray, d: np.ndarray) -> QuadraticForm:
    """1/2 ||Dx - d||^2 expanded."""
    return QuadraticForm(Q=D.T @ D, q=-(D.T @ d), c=0.5 * float(d @ d))


def _check_dims(n: int, d: int, s: int) -> None:
    if n < 1 or d < 1:
        raise BadDimensions(f"n and d must be positive, got n={n}, d={d}")
    if s < 1 or s > n:
        raise BadDimensions(f"s = {s} outside [1, {n}]")


def gen_recovery_simplex(n: int, d: int, s: int, snr_db: float, seed: int) -> InstanceBundle:
    """1/2||Dx - d||^2 over the simplex {x >= 0, sum x = 1} with ||x||_0 <= s.

    Streams: support, values, D, noise. ``snr_db = inf`` gives noiseless data.
    """
    _check_dims(n, d, s)
    rng_support, rng_values, rng_D, rng_noise = streams(seed, 4)

    x_star = np.zeros(n)
    support = np.sort(rng_support.choice(n, size=s, replace=False))
    values = rng_values.uniform(0.0, 1.0, s)
    x_star[support] = values / values.sum()

    D = rng_D.standard_normal((d, n)) / math.sqrt(d)
    signal = D @ x_star
    noise = rng_noise.standard_normal(d)
    if math.isinf(snr_db) and snr_db > 0:
        data = signal
    else:
        nf = np.linalg.norm(signal) / (np.linalg.norm(noise) * 10.0 ** (snr_db / 20.0))
        data = signal + nf * noise

    problem = SQCQPProblem(
        objective=_least_squares_objective(D, data),
        box=BoxSet(lower=np.zeros(n), upper=np.full(n, np.inf)),
        s=s,
        A_eq=np.ones((1, n)),
        b_eq=np.ones(1),
    )
    check_ground_truth(problem, x_star)
    logger.debug("instance_generated", family="recovery-simplex", n=n, d=d, s=s, seed=seed)
    return InstanceBundle(
        problem=problem,
        family="recovery-simplex",
        seed=seed,
        recommended_tau=1.0 if n <= 1000 else 0.1,
        x_star=x_star,
        meta={"d": d, "snr_db": "inf" if math.isinf(snr_db) else snr_db},
    )


def _box_for(kind: str, n: int) -> BoxSet:
    if kind == "free":
        return BoxSet.free(n)
    if kind == "box22":
        return BoxSet.uniform(n, -2.0, 2.0)
    return BoxSet(lower=np.zeros(n), upper=np.full(n, np.inf))


def _planted_values(kind: str, rng: np.random.Generator, s: int) -> np.ndarray:
    if kind == "free":
        return rng.standard_normal(s)
    if kind == "box22":
        return rng.uniform(-BOX22_MARGIN, BOX22_MARGIN, s)
    return rng.uniform(0.0, 2.0, s)


def gen_recovery_qcqp(n: int, d: int, k: int, m: int, s: int, box_kind: str, seed: int) -> InstanceBundle:
    """Least squares with k convex quadratic and m linear inequality constraints.

    Half of each constraint family (rounded up) is slack at the planted point
    by a U[0, 1] margin, the rest is active. Streams: support, values, D, P,
    q, A, slack index choice, quadratic margins, linear margins.
    """
    _check_dims(n, d, s)
    if k < 0 or m < 0:
        raise BadDimensions(f"k and m must be nonnegative, got k={k}, m={m}")
    if box_kind not in BOX_KINDS:
        raise BadDimensions(f"unknown box kind '{box_kind}', expected one of {BOX_KINDS}")
    (rng_support, rng_values, rng_D, rng_P, rng_q, rng_A, rng_pick, rng_zeta, rng_xi) = streams(seed, 9)

    x_star = np.zeros(n)
    support = np.sort(rng_support.choice(n, size=s, replace=False))
    x_star[support] = _planted_values(box_kind, rng_values, s)

    D = rng_D.standard_normal((d, n)) / math.sqrt(d)
    objective = _least_squares_objective(D, D @ x_star)

    slack_quad = np.sort(rng_pick.choice(k, size=math.ceil(k / 2), replace=False)) if k else np.zeros(0, int)
    slack_lin = np.sort(rng_pick.choice(m, size=math.ceil(m / 2), replace=False)) if m else np.zeros(0, int)
    zeta = np.zeros(k)
    zeta[slack_quad] = rng_zeta.uniform(0.0, 1.0, slack_quad.size)
    xi = np.zeros(m)
    xi[slack_lin] = rng_xi.uniform(0.0, 1.0, slack_lin.size)

    forms = []
    for i in range(k):
        P = rng_P.standard_normal((n, n))
        Q = P.T @ P + QUAD_RIDGE * np.eye(n)
        q = rng_q.standard_normal(n)
        c = -0.5 * float(x_star @ Q @ x_star) - float(q @ x_star) - zeta[i]
        forms.append(QuadraticForm(Q=Q, q=q, c=c))

    A = rng_A.standard_normal((m, n))
    b = A @ x_star + xi

    problem = SQCQPProblem(
        objective=objective,
        box=_box_for(box_kind, n),
        s=s,
        quad_constraints=tuple(forms),
        A=A,
        b=b,
    )
    check_ground_truth(problem, x_star)
    logger.debug("instance_generated", family="recovery-qcqp", n=n, d=d, k=k, m=m, s=s, seed=seed)
    return InstanceBundle(
        problem=problem,
        family="recovery-qcqp",
        seed=seed,
        recommended_tau=3.0,
        x_star=x_star,
        meta={
            "d": d,
            "box_kind": box_kind,
            "slack_quadratic": slack_quad.tolist(),
            "slack_linear": slack_lin.tolist(),
        },
    )
