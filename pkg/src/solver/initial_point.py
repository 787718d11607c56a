"""Starting points for the Newton iteration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import structlog
from scipy.linalg import eigh

from src.config import SolverConfig
from src.core.problem import PrimalDualPoint, SQCQPProblem, equality_residual, linear_slack, quad_values
from src.exceptions import InvalidStrategy
from src.projection.operators import project_box, project_sparse

logger = structlog.get_logger(__name__)

MULTIPLIER_START = 0.01
SPARSE_START_VALUE = 0.1
RELAXATION_ITERATIONS = 500
RELAXATION_PENALTY = 100.0
POWER_ITERATIONS = 50

STRATEGY_KINDS = ("zeros", "sparse_uniform", "truncated_relaxation", "given", "dense", "spectral")
DENSE_DISTRIBUTIONS = ("uniform", "normal", "weibull", "student_t")


@dataclass(frozen=True)
class InitialPointStrategy:
    kind: str
    value: float = SPARSE_START_VALUE
    distribution: str = "uniform"
    x: np.ndarray | None = field(default=None, compare=False)
    split: int | None = None

    @classmethod
    def zeros(cls) -> InitialPointStrategy:
        return cls(kind="zeros")

    @classmethod
    def sparse_uniform(cls, value: float = SPARSE_START_VALUE) -> InitialPointStrategy:
        return cls(kind="sparse_uniform", value=value)

    @classmethod
    def truncated_relaxation(cls) -> InitialPointStrategy:
        return cls(kind="truncated_relaxation")

    @classmethod
    def given(cls, x: np.ndarray) -> InitialPointStrategy:
        return cls(kind="given", x=np.asarray(x, dtype=np.float64).reshape(-1))

    @classmethod
    def dense(cls, distribution: str) -> InitialPointStrategy:
        return cls(kind="dense", distribution=distribution)

    @classmethod
    def spectral(cls, split: int | None = None) -> InitialPointStrategy:
        return cls(kind="spectral", split=split)


def _power_norm(apply, n: int, iterations: int = POWER_ITERATIONS) -> float:
    """Largest |eigenvalue| of a symmetric operator by power iteration."""
    if n == 0:
        return 0.0
    v = np.random.default_rng(0).standard_normal(n)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(iterations):
        w = apply(v)
        estimate = float(np.linalg.norm(w))
        if estimate == 0.0:
            return 0.0
        v = w / estimate
    return estimate


def _penalized_gradient(p: SQCQPProblem, x: np.ndarray, weight: float) -> np.ndarray:
    grad = p.objective.gradient(x)
    if p.k:
        active = np.maximum(quad_values(p, x), 0.0)
        for viol, form in zip(active, p.quad_constraints):
            if viol > 0.0:
                grad = grad + weight * viol * form.gradient(x)
    if p.m:
        grad = grad + weight * (p.A.T @ np.maximum(-linear_slack(p, x), 0.0))
    if p.m_eq:
        grad = grad + weight * (p.A_eq.T @ equality_residual(p, x))
    return grad


def relaxation_lipschitz(p: SQCQPProblem, weight: float = RELAXATION_PENALTY) -> float:
    """Step-size constant of the penalized relaxation.

    ||Q_0|| plus the penalty curvature of each constraint family; the quadratic
    constraints contribute weight * ||Q_i|| as a local estimate.
    """
    L = _power_norm(lambda v: p.objective.Q @ v, p.n)
    if p.m:
        L += weight * _power_norm(lambda v: p.A.T @ (p.A @ v), p.n)
    if p.m_eq:
        L += weight * _power_norm(lambda v: p.A_eq.T @ (p.A_eq @ v), p.n)
    for form in p.quad_constraints:
        L += weight * _power_norm(lambda v, Q=form.Q: Q @ v, p.n)
    return L if L > 0.0 else 1.0


def relaxed_solution(p: SQCQPProblem, iterations: int = RELAXATION_ITERATIONS) -> np.ndarray:
    """Projected gradient on the problem without the sparsity constraint."""
    step = 1.0 / relaxation_lipschitz(p)
    x = project_box(np.zeros(p.n), p.box)
    for _ in range(iterations):
        x = project_box(x - step * _penalized_gradient(p, x, RELAXATION_PENALTY), p.box)
    return x


def _block_normalized(w: np.ndarray, weight: np.ndarray | None) -> np.ndarray:
    energy = float(w @ weight @ w) if weight is not None else 0.0
    if energy > 0.0:
        return w / np.sqrt(energy)
    norm = np.linalg.norm(w)
    return w / norm if norm > 0.0 else w


def spectral_start(p: SQCQPProblem, split: int | None = None) -> np.ndarray:
    """Leading eigenvector of -Q_0, truncated to s entries and scaled onto the
    boundary of the first quadratic constraint (unit norm without one).

    With ``split`` the coordinates form two blocks ``[:split]`` and
    ``[split:]``. The first keeps ceil(s/2) entries and the second the rest;
    each block is normalized in the metric of the first constraint so both
    carry the same weight.
    """
    _, vecs = eigh(-np.array(p.objective.Q), subset_by_index=[p.n - 1, p.n - 1])
    v = vecs[:, 0]
    if split is None:
        x = _block_normalized(project_sparse(v, p.s), None)
    else:
        if not 0 < split < p.n:
            raise InvalidStrategy(f"block split {split} outside (0, {p.n})")
        weight = p.quad_constraints[0].Q if p.k else None
        s_x = min(math.ceil(p.s / 2), split)
        s_y = min(p.s - s_x, p.n - split)
        x = np.zeros(p.n)
        for block, size in ((slice(0, split), s_x), (slice(split, p.n), s_y)):
            if size:
                w = project_sparse(v[block], size)
                x[block] = _block_normalized(w, None if weight is None else weight[block, block])
    if not np.any(x):
        return x
    if p.k:
        form = p.quad_constraints[0]
        a = float(x @ form.Q @ x)
        b = float(form.q @ x)
        disc = b * b - 2.0 * a * form.c
        if a > 0.0 and disc >= 0.0:
            x = x * ((-b + np.sqrt(disc)) / a)
    return x


def quadratic_multipliers(p: SQCQPProblem, x: np.ndarray) -> np.ndarray:
    """Least-squares mu for grad f_0 + sum mu_i grad f_i = 0 at x, floored at
    the default multiplier start."""
    if not p.k:
        return np.zeros(0)
    J = np.column_stack([form.gradient(x) for form in p.quad_constraints])
    mu, *_ = np.linalg.lstsq(J, -p.objective.gradient(x), rcond=None)
    return np.maximum(mu, MULTIPLIER_START)


def _dense_start(n: int, distribution: str, rng: np.random.Generator) -> np.ndarray:
    if distribution == "uniform":
        return rng.uniform(0.0, 1.0, n)
    if distribution == "normal":
        return rng.standard_normal(n)
    if distribution == "weibull":
        return 2.0 * rng.weibull(1.5, n)
    if distribution == "student_t":
        return rng.standard_t(10, n)
    raise InvalidStrategy(f"unknown dense distribution '{distribution}', expected one of {DENSE_DISTRIBUTIONS}")


def make_initial_point(
    p: SQCQPProblem, strategy: InitialPointStrategy | str, config: SolverConfig
) -> PrimalDualPoint:
    """x^0 from ``strategy``; nu^0 = 0, mu^0 = lam^0 = 0.01, zeta^0 = 0.

    The spectral start takes mu^0 from ``quadratic_multipliers`` instead.
    """
    if isinstance(strategy, str):
        if strategy not in ("zeros", "sparse_uniform", "truncated_relaxation", "spectral"):
            raise InvalidStrategy(f"strategy '{strategy}' needs parameters or is unknown")
        strategy = InitialPointStrategy(kind=strategy)

    n = p.n
    rng = np.random.default_rng(config.seed)
    if strategy.kind == "zeros":
        x = np.zeros(n)
    elif strategy.kind == "sparse_uniform":
        x = np.zeros(n)
        x[rng.choice(n, size=p.s, replace=False)] = strategy.value
    elif strategy.kind == "truncated_relaxation":
        x = project_sparse(relaxed_solution(p), p.s)
    elif strategy.kind == "given":
        if strategy.x is None or strategy.x.shape[0] != n:
            raise InvalidStrategy(f"given strategy needs an x of length {n}")
        x = np.array(strategy.x)
    elif strategy.kind == "dense":
        x = _dense_start(n, strategy.distribution, rng)
    elif strategy.kind == "spectral":
        x = spectral_start(p, strategy.split)
    else:
        raise InvalidStrategy(f"unknown strategy '{strategy.kind}', expected one of {STRATEGY_KINDS}")

    mu = quadratic_multipliers(p, x) if strategy.kind == "spectral" else np.full(p.k, MULTIPLIER_START)
    logger.debug("initial_point", strategy=strategy.kind, nnz=int(np.count_nonzero(x)))
    return PrimalDualPoint(
        x=x,
        nu=np.zeros(n),
        mu=mu,
        lam=np.full(p.m, MULTIPLIER_START),
        zeta=np.zeros(p.m_eq),
    )


def strategy_from_name(name: str, meta: dict[str, Any] | None = None) -> InitialPointStrategy:
    """CLI names: zeros, sparse, relax, spectral, dense-<distribution>.

    A spectral start splits its support at ``meta["n_x"]`` when present.
    """
    if name == "zeros":
        return InitialPointStrategy.zeros()
    if name == "sparse":
        return InitialPointStrategy.sparse_uniform()
    if name == "relax":
        return InitialPointStrategy.truncated_relaxation()
    if name == "spectral":
        split = (meta or {}).get("n_x")
        return InitialPointStrategy.spectral(int(split) if split is not None else None)
    if name.startswith("dense-") and name[len("dense-") :] in DENSE_DISTRIBUTIONS:
        return InitialPointStrategy.dense(name[len("dense-") :])
    raise InvalidStrategy(f"unknown initialization '{name}'")
