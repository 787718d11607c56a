"""Semismooth Newton iteration for sparse QCQPs.

Each iteration picks T from the current scores u = x - tau (grad L + nu),
solves the reduced Newton system, backtracks on the merit function and sets
the off-support blocks of x and nu to exact zeros.
"""

from __future__ import annotations

import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import structlog

from src.config import SolverConfig
from src.core.lagrangian import eval_objective
from src.core.problem import PrimalDualPoint, SQCQPProblem, check_point, constraint_violation, validate_problem
from src.exceptions import InvalidConfig, InvalidStrategy
from src.jacobian.generalized import assemble_G
from src.projection.operators import SupportSet, select_support
from src.services.metrics import record_solve
from src.solver.line_search import apply_step, line_search
from src.solver.newton import newton_direction
from src.stationary.equations import assemble_F

logger = structlog.get_logger(__name__)

CONVERGED = "Converged"
MAX_ITERATIONS = "MaxIterations"
STALLED = "Stalled"

# relative decrease of the best residual that counts as progress
STALL_RTOL = 1e-16
# feasibility tolerance used when ranking multi-start results
FEASIBILITY_TOL = 1e-6


@dataclass(frozen=True)
class SolveReport:
    status: str
    iterations: int
    final_point: PrimalDualPoint
    residual_history: list[float]
    fallback_count: int
    backtrack_counts: list[int]
    support_history: list[SupportSet]
    wall_time: float
    config: SolverConfig
    nnz_history: list[int] = field(default_factory=list)
    step_sizes: list[float] = field(default_factory=list)
    failed_searches: int = 0
    degenerate_steps: int = 0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else float("nan")

    @property
    def x(self) -> np.ndarray:
        return self.final_point.x

    def to_dict(self) -> dict[str, Any]:
        Y = self.final_point
        return {
            "status": self.status,
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "final_point": {
                "x": Y.x.tolist(),
                "nu": Y.nu.tolist(),
                "mu": Y.mu.tolist(),
                "lam": Y.lam.tolist(),
                "zeta": Y.zeta.tolist(),
            },
            "residual_history": list(self.residual_history),
            "nnz_history": list(self.nnz_history),
            "step_sizes": list(self.step_sizes),
            "backtrack_counts": list(self.backtrack_counts),
            "support_history": [T.to_list() for T in self.support_history],
            "fallback_count": self.fallback_count,
            "failed_searches": self.failed_searches,
            "degenerate_steps": self.degenerate_steps,
            "wall_time": self.wall_time,
            "config": self.config.model_dump(),
        }


def snsqp_solve(p: SQCQPProblem, Y0: PrimalDualPoint, config: SolverConfig) -> SolveReport:
    validate_problem(p)
    check_point(p, Y0)

    Y = Y0
    residuals: list[float] = []
    nnz: list[int] = []
    supports: list[SupportSet] = []
    backtracks: list[int] = []
    steps: list[float] = []
    fallbacks = 0
    failed_total = 0
    failed_streak = 0
    degenerate = 0
    best = np.inf
    best_iter = 0
    status = MAX_ITERATIONS
    iteration = 0

    start = time.perf_counter()
    for iteration in range(config.max_iter + 1):
        T = select_support(p, Y, config.tau)
        F = assemble_F(p, Y, T)
        res = F.norm()
        residuals.append(res)
        supports.append(T)
        nnz.append(int(np.count_nonzero(Y.x)))
        logger.debug("newton_iteration", iteration=iteration, residual=res, support_size=len(T))

        if res <= config.eps:
            status = CONVERGED
            break
        if iteration == config.max_iter:
            status = MAX_ITERATIONS
            break
        if failed_streak >= config.max_failed_searches:
            status = STALLED
            logger.warning("solve_stalled", reason="line_search", iteration=iteration, residual=res)
            break
        if res < best * (1.0 - STALL_RTOL):
            best, best_iter = res, iteration
        elif iteration - best_iter >= config.stall_window:
            status = STALLED
            logger.warning("solve_stalled", reason="no_progress", iteration=iteration, residual=res)
            break

        blocks = assemble_G(p, Y, T)
        direction = newton_direction(p, Y, T, iteration, config, F=F, blocks=blocks)
        fallbacks += int(direction.used_fallback)
        search = line_search(p, Y, T, direction, config, F=F, blocks=blocks)
        backtracks.append(search.t)
        steps.append(search.alpha)
        degenerate += int(search.degenerate)
        if search.accepted:
            failed_streak = 0
        else:
            failed_streak += 1
            failed_total += 1
        Y = apply_step(p, Y, T, direction, search.alpha)

    wall_time = time.perf_counter() - start
    record_solve(status, iteration, wall_time, residuals[-1])
    logger.info(
        "solve_finished",
        status=status,
        iterations=iteration,
        residual=residuals[-1],
        fallbacks=fallbacks,
        wall_time=round(wall_time, 6),
    )
    return SolveReport(
        status=status,
        iterations=iteration,
        final_point=Y,
        residual_history=residuals,
        fallback_count=fallbacks,
        backtrack_counts=backtracks,
        support_history=supports,
        wall_time=wall_time,
        config=config,
        nnz_history=nnz,
        step_sizes=steps,
        failed_searches=failed_total,
        degenerate_steps=degenerate,
    )


def _both_blocks_nonzero(x: np.ndarray, split: int) -> bool:
    return bool(np.any(x[:split]) and np.any(x[split:]))


def solve_tau_grid(
    p: SQCQPProblem,
    Y0: PrimalDualPoint,
    taus: Iterable[float],
    config: SolverConfig,
    split: int | None = None,
) -> SolveReport:
    """Run one solve per tau and keep the lowest objective among converged runs,
    or the smallest final residual when none converged.

    With ``split`` a converged run whose x[:split] or x[split:] vanishes is
    only kept when no converged run has both blocks.
    """
    reports = [snsqp_solve(p, Y0, config.model_copy(update={"tau": float(tau)})) for tau in taus]
    if not reports:
        raise InvalidConfig("tau grid is empty")
    converged = [r for r in reports if r.converged]
    if split is not None:
        converged = [r for r in converged if _both_blocks_nonzero(r.x, split)] or converged
    if converged:
        best = min(converged, key=lambda r: eval_objective(p, r.x))
    else:
        best = min(reports, key=lambda r: r.final_residual)
    logger.info("tau_grid_finished", tau=best.config.tau, status=best.status, runs=len(reports))
    return best


def multi_start_solve(p: SQCQPProblem, starts: Sequence[PrimalDualPoint], config: SolverConfig) -> SolveReport:
    """Best objective over several starts.

    Converged feasible runs come first, then any feasible run, then the
    smallest final residual.
    """
    if not starts:
        raise InvalidStrategy("no starting points given")
    reports = [snsqp_solve(p, Y0, config) for Y0 in starts]
    feasible = [r for r in reports if constraint_violation(p, r.x)["max"] <= FEASIBILITY_TOL]
    for pool in ([r for r in feasible if r.converged], feasible):
        if pool:
            return min(pool, key=lambda r: eval_objective(p, r.x))
    return min(reports, key=lambda r: r.final_residual)
