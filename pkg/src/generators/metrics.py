"""Solution quality measures reported by the CLI and the bench."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
import structlog

from src.core.lagrangian import eval_objective
from src.core.problem import SQCQPProblem, check_vector, constraint_violation
from src.exceptions import MissingGroundTruth, ZeroDenominator
from src.generators.scca import covariance_blocks

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class CCAMetrics:
    correlation: float
    rho_x: float
    rho_y: float
    voc_x: float
    voc_y: float


@dataclass(frozen=True)
class MetricsRecord:
    fval: float
    max_violation: float
    violations: dict[str, float]
    nnz: int
    relerr: float | None = None
    rsnr: float | None = None
    solve_time: float | None = None
    cca: CCAMetrics | None = None

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        if self.rsnr is not None and math.isinf(self.rsnr):
            out["rsnr"] = "inf"
        return out


def relerr(x: np.ndarray, x_star: np.ndarray | None) -> float:
    """||x - x*|| / ||x*||."""
    if x_star is None:
        raise MissingGroundTruth("relative error needs a ground truth x*")
    denominator = float(np.linalg.norm(x_star))
    if denominator == 0.0:
        raise ZeroDenominator("ground truth x* is zero")
    return float(np.linalg.norm(x - x_star)) / denominator


def rsnr(x: np.ndarray, x_star: np.ndarray | None) -> float:
    """10 log10(||x*||^2 / ||x - x*||^2) in dB; +inf at exact recovery."""
    if x_star is None:
        raise MissingGroundTruth("RSNR needs a ground truth x*")
    error = float(np.linalg.norm(x - x_star))
    if error == 0.0:
        return math.inf
    return 20.0 * math.log10(float(np.linalg.norm(x_star)) / error)


def cca_metrics(x: np.ndarray, p: SQCQPProblem, n_x: int) -> CCAMetrics:
    S_xy, S_xx, S_yy = covariance_blocks(p, n_x)
    w_x, w_y = x[:n_x], x[n_x:]
    var_x = float(w_x @ S_xx @ w_x)
    var_y = float(w_y @ S_yy @ w_y)
    denominator = math.sqrt(max(var_x, 0.0) * max(var_y, 0.0))
    if denominator == 0.0:
        logger.warning("correlation_undefined", var_x=var_x, var_y=var_y)
        correlation = 0.0
    else:
        correlation = float(w_x @ S_xy @ w_y) / denominator
    n_y = p.n - n_x
    return CCAMetrics(
        correlation=correlation,
        rho_x=(n_x - int(np.count_nonzero(w_x))) / n_x,
        rho_y=(n_y - int(np.count_nonzero(w_y))) / n_y,
        voc_x=abs(var_x - 1.0),
        voc_y=abs(var_y - 1.0),
    )


def metrics(
    x: np.ndarray,
    x_star: np.ndarray | None,
    p: SQCQPProblem,
    solve_time: float | None = None,
    meta: dict[str, Any] | None = None,
    require_ground_truth: bool = False,
) -> MetricsRecord:
    """Fval, violations and sparsity always; Relerr/RSNR when x* is known;
    CCA measures when ``meta`` carries ``n_x``."""
    x = check_vector("x", x, p.n)
    if x_star is None and require_ground_truth:
        raise MissingGroundTruth("Relerr and RSNR were requested but the instance has no x_star")
    if x_star is not None:
        x_star = check_vector("x_star", x_star, p.n)

    violations = constraint_violation(p, x)
    meta = meta or {}
    cca = cca_metrics(x, p, int(meta["n_x"])) if "n_x" in meta else None
    return MetricsRecord(
        fval=eval_objective(p, x),
        max_violation=violations["max"],
        violations=violations,
        nnz=int(np.count_nonzero(x)),
        relerr=None if x_star is None else relerr(x, x_star),
        rsnr=None if x_star is None else rsnr(x, x_star),
        solve_time=solve_time,
        cca=cca,
    )
