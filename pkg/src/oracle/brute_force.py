"""Reference solutions for tiny instances by support enumeration.

Each support is solved by nested grid refinement followed by a penalized
projected-gradient polish. The oracle shares no code path with the Newton
solver beyond problem evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import structlog

from src.core.problem import SQCQPProblem, constraint_violation, validate_problem
from src.exceptions import OracleScaleExceeded
from src.projection.operators import SupportSet

logger = structlog.get_logger(__name__)

MAX_SUPPORT = 3
MAX_N = 8
BOX_CAP = 10.0
GRID_INTERVALS = 50
REFINE_FACTOR = 10
REFINE_LEVELS = 2
FEASIBILITY_TOL = 1e-6
POLISH_STEPS = 200
POLISH_PENALTY = 1e4


@dataclass(frozen=True)
class RestrictedSolution:
    x: np.ndarray
    value: float
    feasible: bool


@dataclass(frozen=True)
class SupportResult:
    support: SupportSet
    value: float
    feasible: bool


@dataclass(frozen=True)
class OracleResult:
    best_x: np.ndarray
    best_value: float
    per_support: list[SupportResult]
    tolerance: float = FEASIBILITY_TOL

    @property
    def feasible(self) -> bool:
        return any(r.feasible for r in self.per_support)

    @property
    def best_support(self) -> SupportSet | None:
        candidates = [r for r in self.per_support if r.feasible]
        if not candidates:
            return None
        return min(candidates, key=lambda r: r.value).support


class _RestrictedProblem:
    """The instance seen through coordinates t, with x fixed to 0 elsewhere."""

    def __init__(self, p: SQCQPProblem, t: np.ndarray) -> None:
        idx = np.ix_(t, t)
        self.Q0 = p.objective.Q[idx]
        self.q0 = p.objective.q[t]
        self.c0 = p.objective.c
        self.quad = [(form.Q[idx], form.q[t], form.c) for form in p.quad_constraints]
        self.A, self.b = p.A[:, t], p.b
        self.E, self.e = p.A_eq[:, t], p.b_eq

    def values(self, P: np.ndarray) -> np.ndarray:
        return 0.5 * np.einsum("ij,jk,ik->i", P, self.Q0, P) + P @ self.q0 + self.c0

    def residuals(self, P: np.ndarray) -> np.ndarray:
        """Per-point violations, one column per constraint (0 when satisfied)."""
        cols = [
            np.maximum(0.5 * np.einsum("ij,jk,ik->i", P, Q, P) + P @ q + c, 0.0) for Q, q, c in self.quad
        ]
        if self.b.size:
            cols.append(np.maximum(P @ self.A.T - self.b, 0.0))
        if self.e.size:
            cols.append(P @ self.E.T - self.e)
        if not cols:
            return np.zeros((P.shape[0], 0))
        return np.column_stack([c.reshape(P.shape[0], -1) for c in cols])

    def violation(self, P: np.ndarray) -> np.ndarray:
        return np.max(np.abs(self.residuals(P)), axis=1, initial=0.0)

    def penalized(self, z: np.ndarray) -> tuple[float, np.ndarray]:
        """f_0 + w * ||violations||^2 and its gradient at a single point."""
        value = float(0.5 * z @ self.Q0 @ z + self.q0 @ z + self.c0)
        grad = self.Q0 @ z + self.q0
        for Q, q, c in self.quad:
            viol = max(0.5 * z @ Q @ z + q @ z + c, 0.0)
            value += POLISH_PENALTY * viol**2
            grad = grad + 2.0 * POLISH_PENALTY * viol * (Q @ z + q)
        if self.b.size:
            viol = np.maximum(self.A @ z - self.b, 0.0)
            value += POLISH_PENALTY * float(viol @ viol)
            grad = grad + 2.0 * POLISH_PENALTY * (self.A.T @ viol)
        if self.e.size:
            viol = self.E @ z - self.e
            value += POLISH_PENALTY * float(viol @ viol)
            grad = grad + 2.0 * POLISH_PENALTY * (self.E.T @ viol)
        return value, grad


def _grid(lo: np.ndarray, hi: np.ndarray, points: int, include_zero: bool) -> np.ndarray:
    axes = []
    for a, b in zip(lo, hi):
        axis = np.linspace(a, b, points)
        if include_zero:
            axis = np.union1d(axis, [0.0])
        axes.append(axis)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def _pick(rp: _RestrictedProblem, P: np.ndarray) -> tuple[np.ndarray, bool]:
    """Best feasible grid point, or the least violated one when none is feasible."""
    viol = rp.violation(P)
    ok = viol <= FEASIBILITY_TOL
    if np.any(ok):
        values = np.where(ok, rp.values(P), np.inf)
        return P[int(np.argmin(values))], True
    return P[int(np.argmin(viol))], False


def _polish(rp: _RestrictedProblem, z0: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    z = np.array(z0)
    value, grad = rp.penalized(z)
    step = 1.0
    for _ in range(POLISH_STEPS):
        while step > 1e-16:
            trial = np.clip(z - step * grad, lo, hi)
            trial_value, trial_grad = rp.penalized(trial)
            if trial_value <= value - 1e-4 / step * float((trial - z) @ (trial - z)):
                break
            step *= 0.5
        else:
            break
        z, value, grad = trial, trial_value, trial_grad
        step *= 2.0
    return z


def restricted_solve(p: SQCQPProblem, T: SupportSet) -> RestrictedSolution:
    """min f_0 over x with x_Tbar = 0 and x_T in the (capped) box, all constraints kept."""
    if len(T) > MAX_SUPPORT:
        raise OracleScaleExceeded(f"support of size {len(T)} exceeds {MAX_SUPPORT}")
    t = T.indices
    capped = p.box.capped(BOX_CAP).restrict(t)
    lo, hi = capped.lower, capped.upper
    rp = _RestrictedProblem(p, t)

    spacing = (hi - lo) / GRID_INTERVALS
    z, feasible = _pick(rp, _grid(lo, hi, GRID_INTERVALS + 1, include_zero=True))
    for _ in range(REFINE_LEVELS):
        new_spacing = spacing / REFINE_FACTOR
        P = _grid(
            np.maximum(z - spacing, lo),
            np.minimum(z + spacing, hi),
            2 * REFINE_FACTOR + 1,
            include_zero=False,
        )
        candidate, candidate_feasible = _pick(rp, np.vstack([P, z[None, :]]))
        if candidate_feasible or not feasible:
            z, feasible = candidate, candidate_feasible
        spacing = new_spacing

    polished = _polish(rp, z, lo, hi)
    polished_feasible = rp.violation(polished[None, :])[0] <= FEASIBILITY_TOL
    if polished_feasible and (not feasible or rp.values(polished[None, :])[0] <= rp.values(z[None, :])[0]):
        z, feasible = polished, True

    x = np.zeros(p.n)
    x[t] = z
    return RestrictedSolution(x=x, value=p.objective.value(x), feasible=bool(feasible))


def brute_force_solve(p: SQCQPProblem) -> OracleResult:
    validate_problem(p)
    if p.n > MAX_N or p.s > MAX_SUPPORT:
        raise OracleScaleExceeded(f"oracle handles n <= {MAX_N} and s <= {MAX_SUPPORT}, got n={p.n}, s={p.s}")

    per_support: list[SupportResult] = []
    best_x = np.zeros(p.n)
    best_value = np.inf
    for combo in combinations(range(p.n), min(p.s, p.n)):
        T = SupportSet(np.asarray(combo))
        sol = restricted_solve(p, T)
        per_support.append(SupportResult(support=T, value=sol.value, feasible=sol.feasible))
        if sol.feasible and sol.value < best_value:
            best_x, best_value = sol.x, sol.value

    if not np.isfinite(best_value):
        logger.warning("oracle_infeasible", n=p.n, s=p.s, supports=len(per_support))
    else:
        logger.debug(
            "oracle_finished",
            best_value=best_value,
            violation=constraint_violation(p, best_x)["max"],
        )
    return OracleResult(best_x=best_x, best_value=float(best_value), per_support=per_support)
