from __future__ import annotations

import numpy as np

from src.core.problem import PrimalDualPoint, SQCQPProblem, check_point, check_vector
from src.exceptions import UnsupportedCase, ZeroDenominator


def eval_objective(p: SQCQPProblem, x: np.ndarray) -> float:
    x = check_vector("x", x, p.n)
    return p.objective.value(x)


def eval_lagrangian(p: SQCQPProblem, Y: PrimalDualPoint) -> float:
    """L(x, mu, lam, zeta) = f_0 + sum mu_i f_i + lam'(Ax - b) + zeta'(A_eq x - b_eq).

    The box multiplier is not part of L; it enters the stationary system separately.
    """
    check_point(p, Y)
    x = Y.x
    value = p.objective.value(x)
    for mu_i, form in zip(Y.mu, p.quad_constraints):
        value += mu_i * form.value(x)
    value += Y.lam @ (p.A @ x - p.b)
    value += Y.zeta @ (p.A_eq @ x - p.b_eq)
    return float(value)


def lagrangian_gradient(p: SQCQPProblem, Y: PrimalDualPoint) -> np.ndarray:
    check_point(p, Y)
    x = Y.x
    grad = p.objective.gradient(x)
    for mu_i, form in zip(Y.mu, p.quad_constraints):
        if mu_i != 0.0:
            grad = grad + mu_i * form.gradient(x)
    if p.m:
        grad = grad + p.A.T @ Y.lam
    if p.m_eq:
        grad = grad + p.A_eq.T @ Y.zeta
    return grad


def lagrangian_hessian(p: SQCQPProblem, Y: PrimalDualPoint) -> np.ndarray:
    check_point(p, Y)
    H = np.array(p.objective.Q)
    for mu_i, form in zip(Y.mu, p.quad_constraints):
        if mu_i != 0.0:
            H += mu_i * form.Q
    return H


def hessian_block(p: SQCQPProblem, mu: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """(Q_0 + sum mu_i Q_i)[rows, cols] without forming the full n x n Hessian."""
    idx = np.ix_(rows, cols)
    H = np.array(p.objective.Q[idx])
    for mu_i, form in zip(mu, p.quad_constraints):
        if mu_i != 0.0:
            H += mu_i * form.Q[idx]
    return H


def tau_lower_bound(p: SQCQPProblem, ell: float, u: float) -> float:
    """Explicit tau below which P-stationarity holds for sparse points with
    min nonzero magnitude >= ell and max magnitude <= u (no constraints case)."""
    if p.k or p.m or p.m_eq:
        raise UnsupportedCase("tau lower bound is only available without constraints (k = m = m_eq = 0)")
    if ell <= 0 or u <= 0:
        raise UnsupportedCase(f"ell and u must be positive, got ell={ell}, u={u}")
    denominator = u * np.linalg.norm(p.objective.Q, 1) + np.linalg.norm(p.objective.q, np.inf)
    if denominator == 0.0:
        raise ZeroDenominator("Q_0 = 0 and q_0 = 0")
    return float(ell / denominator)
