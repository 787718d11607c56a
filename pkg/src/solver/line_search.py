from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog

from src.config import SolverConfig
from src.core.problem import PrimalDualPoint, SQCQPProblem
from src.jacobian.generalized import JacobianBlocks, apply_W
from src.projection.operators import SupportSet
from src.services.metrics import record_line_search
from src.solver.newton import NewtonDirection
from src.stationary.equations import ResidualVector, assemble_F, merit

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class LineSearchResult:
    alpha: float
    t: int
    accepted: bool
    degenerate: bool
    slope: float
    merit_before: float
    merit_after: float


def apply_step(
    p: SQCQPProblem, Y: PrimalDualPoint, T: SupportSet, direction: NewtonDirection, alpha: float
) -> PrimalDualPoint:
    """y + d(alpha): the K-block is scaled by alpha, the complement blocks are
    taken in full, which sets x_Tbar and nu_Tbar to exact zeros."""
    t = T.indices
    tc = T.complement(p.n)
    dx_t, dmu, dlam, dnu_t, dzeta = direction.split_K(p.s, p.k, p.m)

    x = np.array(Y.x)
    nu = np.array(Y.nu)
    x[t] += alpha * dx_t
    x[tc] = 0.0
    nu[t] += alpha * dnu_t
    nu[tc] = 0.0
    return PrimalDualPoint(
        x=x,
        nu=nu,
        mu=Y.mu + alpha * dmu,
        lam=Y.lam + alpha * dlam,
        zeta=Y.zeta + alpha * dzeta,
    )


def line_search(
    p: SQCQPProblem,
    Y: PrimalDualPoint,
    T: SupportSet,
    direction: NewtonDirection,
    config: SolverConfig,
    F: ResidualVector | None = None,
    blocks: JacobianBlocks | None = None,
) -> LineSearchResult:
    """Armijo backtracking on Psi = 1/2 ||F(.; T)||^2 with alpha = rho^t.

    When no trial passes within ``max_backtracks`` the smallest trial step is
    returned with ``accepted=False``.
    """
    if F is None:
        F = assemble_F(p, Y, T)
    f = F.vector
    psi0 = 0.5 * float(f @ f)
    slope = float(f @ apply_W(p, Y, T, direction.flatten(p.s, p.k, p.m), blocks))
    degenerate = slope >= 0.0

    psi_t = psi0
    for t in range(config.max_backtracks + 1):
        alpha = config.rho**t
        psi_t = merit(p, apply_step(p, Y, T, direction, alpha), T)
        if psi_t <= psi0 + config.sigma * alpha * slope:
            record_line_search(t, accepted=True)
            return LineSearchResult(
                alpha=alpha,
                t=t,
                accepted=True,
                degenerate=degenerate,
                slope=slope,
                merit_before=psi0,
                merit_after=psi_t,
            )

    alpha = config.rho**config.max_backtracks
    record_line_search(config.max_backtracks, accepted=False)
    logger.debug("line_search_failed", slope=slope, merit=psi0, backtracks=config.max_backtracks)
    return LineSearchResult(
        alpha=alpha,
        t=config.max_backtracks,
        accepted=False,
        degenerate=degenerate,
        slope=slope,
        merit_before=psi0,
        merit_after=psi_t,
    )
