"""Newton direction on the reduced system G d_K = D x_Tbar - F_K."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import structlog
from scipy.linalg import LinAlgError, LinAlgWarning, lu_factor, lu_solve, solve

from src.config import SolverConfig
from src.core.problem import PrimalDualPoint, SQCQPProblem
from src.exceptions import FactorizationFailure
from src.jacobian.generalized import JacobianBlocks, apply_D_sparse, assemble_G
from src.projection.operators import SupportSet
from src.services.metrics import record_newton_fallback
from src.stationary.equations import ResidualVector, assemble_F

logger = structlog.get_logger(__name__)

PIVOT_RTOL = 1e-14
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class NewtonDirection:
    d_xcomp: np.ndarray
    d_nucomp: np.ndarray
    d_K: np.ndarray
    used_fallback: bool
    kappa: float

    def split_K(self, s: int, k: int, m: int) -> tuple[np.ndarray, ...]:
        """(d^x_T, d^mu, d^lam, d^nu_T, d^zeta)."""
        d = self.d_K
        return d[:s], d[s : s + k], d[s + k : s + k + m], d[s + k + m : 2 * s + k + m], d[2 * s + k + m :]

    def flatten(self, s: int, k: int, m: int) -> np.ndarray:
        """Layout expected by apply_W: (x_T; x_Tbar; nu_T; nu_Tbar; mu; lam; zeta)."""
        dx_t, dmu, dlam, dnu_t, dzeta = self.split_K(s, k, m)
        return np.concatenate([dx_t, self.d_xcomp, dnu_t, self.d_nucomp, dmu, dlam, dzeta])


def _direct_solve(G: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    scale = float(np.max(np.abs(G), initial=0.0))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        try:
            lu, piv = lu_factor(G, check_finite=False)
        except (LinAlgError, ValueError):
            return None
    pivot_min = float(np.min(np.abs(np.diag(lu))))
    if scale == 0.0 or pivot_min <= PIVOT_RTOL * scale:
        return None
    d = lu_solve((lu, piv), rhs, check_finite=False)
    if not np.all(np.isfinite(d)):
        return None
    if np.linalg.norm(G @ d - rhs) > RESIDUAL_RTOL * (1.0 + np.linalg.norm(rhs)):
        return None
    return d


def solve_reduced_system(G: np.ndarray, rhs: np.ndarray, kappa: float) -> tuple[np.ndarray, bool]:
    """Solve G d = rhs, falling back to (G'G + kappa I) d = G' rhs.

    Returns the solution and whether the regularized system was used.
    """
    d = _direct_solve(G, rhs)
    if d is not None:
        return d, False

    normal = G.T @ G + kappa * np.eye(G.shape[0])
    try:
        d = solve(normal, G.T @ rhs, assume_a="pos", check_finite=False)
    except (LinAlgError, ValueError) as e:
        raise FactorizationFailure(f"regularized Newton system failed (kappa={kappa:.3e}): {e}") from e
    if not np.all(np.isfinite(d)):
        raise FactorizationFailure(f"regularized Newton system produced non-finite values (kappa={kappa:.3e})")
    return d, True


def newton_direction(
    p: SQCQPProblem,
    Y: PrimalDualPoint,
    T: SupportSet,
    iter_index: int,
    config: SolverConfig,
    F: ResidualVector | None = None,
    blocks: JacobianBlocks | None = None,
) -> NewtonDirection:
    if F is None:
        F = assemble_F(p, Y, T)
    if blocks is None:
        blocks = assemble_G(p, Y, T)

    rhs = apply_D_sparse(p, Y, T, F.x_comp, blocks) - F.k_rows
    kappa = config.kappa0 / max(iter_index, 1)
    d_K, used_fallback = solve_reduced_system(blocks.G, rhs, kappa)
    if used_fallback:
        record_newton_fallback()
        logger.debug("newton_fallback", iteration=iter_index, kappa=kappa)

    return NewtonDirection(
        d_xcomp=-F.x_comp,
        d_nucomp=-F.nu_comp,
        d_K=d_K,
        used_fallback=used_fallback,
        kappa=kappa if used_fallback else 0.0,
    )
