"""Stationary equations F(Y; T), the merit function and the P-stationarity check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.core.lagrangian import lagrangian_gradient
from src.core.problem import PrimalDualPoint, SQCQPProblem, check_point, equality_residual
from src.exceptions import DimensionMismatch
from src.ncp.fischer_burmeister import phi_vec, psi_vec
from src.projection.operators import SupportSet, project_box

# |x_i| above this counts towards supp(x)
SUPPORT_THRESHOLD = 1e-12

BLOCK_ORDER = ("grad_T", "x_comp", "proj", "nu_comp", "phi", "psi", "eq")


@dataclass(frozen=True)
class ResidualVector:
    """F(Y; T) split into its blocks, in the fixed row order of BLOCK_ORDER."""

    grad_T: np.ndarray
    x_comp: np.ndarray
    proj: np.ndarray
    nu_comp: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    eq: np.ndarray
    support: SupportSet

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([getattr(self, name) for name in BLOCK_ORDER])

    @property
    def k_rows(self) -> np.ndarray:
        """Rows matched by the reduced matrix G: grad_T, proj, phi, psi, eq."""
        return np.concatenate([self.grad_T, self.proj, self.phi, self.psi, self.eq])

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.vector), initial=0.0))

    def __len__(self) -> int:
        return sum(getattr(self, name).shape[0] for name in BLOCK_ORDER)


def _check_support(p: SQCQPProblem, T: SupportSet) -> None:
    if len(T) != p.s:
        raise DimensionMismatch(f"support has {len(T)} indices, expected s = {p.s}")
    if len(T) and (T.indices[0] < 0 or T.indices[-1] >= p.n):
        raise DimensionMismatch(f"support indices must lie in [0, {p.n})")


def assemble_F(p: SQCQPProblem, Y: PrimalDualPoint, T: SupportSet) -> ResidualVector:
    check_point(p, Y)
    _check_support(p, T)
    t = T.indices
    tc = T.complement(p.n)

    grad = lagrangian_gradient(p, Y) + Y.nu
    x_t = Y.x[t]
    proj = x_t - project_box(x_t + Y.nu[t], p.box.restrict(t))
    return ResidualVector(
        grad_T=grad[t],
        x_comp=np.array(Y.x[tc]),
        proj=proj,
        nu_comp=np.array(Y.nu[tc]),
        phi=phi_vec(p, Y.x, Y.mu),
        psi=psi_vec(p, Y.x, Y.lam),
        eq=equality_residual(p, Y.x),
        support=T,
    )


def merit(p: SQCQPProblem, Y: PrimalDualPoint, T: SupportSet) -> float:
    """Psi(Y; T) = 1/2 ||F(Y; T)||^2."""
    F = assemble_F(p, Y, T).vector
    return 0.5 * float(F @ F)


@dataclass(frozen=True)
class StationarityReport:
    passed: bool
    worst_violation: float
    which: str
    checks: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "worst_violation": self.worst_violation,
            "which": self.which,
            "checks": dict(self.checks),
        }


def _inf_norm(v: np.ndarray) -> float:
    return float(np.max(np.abs(v), initial=0.0))


def verify_p_stationarity(p: SQCQPProblem, Y: PrimalDualPoint, tau: float, tol: float) -> StationarityReport:
    """Check the projection fixed-point characterization of P-stationarity.

    Each branch yields a violation amount; a check fails when its amount exceeds
    ``tol`` (for the strict tau inequality, when it is not below ``tol``).
    ``which`` names the failing check with the largest violation, or "none".
    """
    check_point(p, Y)
    x = Y.x
    gamma = np.abs(x) > SUPPORT_THRESHOLD
    nnz = int(np.count_nonzero(gamma))
    if nnz > p.s:
        return StationarityReport(
            passed=False,
            worst_violation=float(nnz - p.s),
            which="sparsity-violated",
            checks={"sparsity-violated": float(nnz - p.s)},
        )

    g = lagrangian_gradient(p, Y)
    idx = np.flatnonzero(gamma)
    off = np.flatnonzero(~gamma)

    checks: dict[str, float] = {"gradient-support": _inf_norm((g + Y.nu)[idx])}
    failed: dict[str, float] = {}
    if nnz == p.s:
        x_s = float(np.min(np.abs(x[idx])))
        amount = tau * _inf_norm(g[off]) - x_s
        checks["tau-strict-inequality"] = max(amount, 0.0)
        if amount >= tol:
            failed["tau-strict-inequality"] = max(amount, tol)
    else:
        checks["gradient-off-support"] = _inf_norm(g[off])

    x_g = x[idx]
    checks["box-projection"] = _inf_norm(x_g - project_box(x_g + Y.nu[idx], p.box.restrict(idx)))
    checks["nu-off-support"] = _inf_norm(Y.nu[off])
    checks["phi"] = _inf_norm(phi_vec(p, x, Y.mu))
    checks["psi"] = _inf_norm(psi_vec(p, x, Y.lam))
    checks["equality"] = _inf_norm(equality_residual(p, x))

    for label, amount in checks.items():
        if label != "tau-strict-inequality" and amount > tol:
            failed[label] = amount

    worst = max(checks.values(), default=0.0)
    if failed:
        which = max(failed, key=failed.get)
        return StationarityReport(passed=False, worst_violation=max(worst, failed[which]), which=which, checks=checks)
    return StationarityReport(passed=True, worst_violation=worst, which="none", checks=checks)
