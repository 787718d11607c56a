from __future__ import annotations

import numpy as np

from src.core.problem import BoxSet, PrimalDualPoint, QuadraticForm, SQCQPProblem


def least_squares_to(target, box: BoxSet | None = None, s: int = 1, **constraints) -> SQCQPProblem:
    """f_0 = 1/2 ||x - target||^2."""
    target = np.asarray(target, dtype=float)
    n = target.shape[0]
    return SQCQPProblem(
        objective=QuadraticForm(Q=np.eye(n), q=-target, c=0.5 * float(target @ target)),
        box=box if box is not None else BoxSet.free(n),
        s=s,
        **constraints,
    )


def point(p: SQCQPProblem, x, nu=None, mu=None, lam=None, zeta=None) -> PrimalDualPoint:
    return PrimalDualPoint(
        x=np.asarray(x, dtype=float),
        nu=np.zeros(p.n) if nu is None else np.asarray(nu, dtype=float),
        mu=np.zeros(p.k) if mu is None else np.asarray(mu, dtype=float),
        lam=np.zeros(p.m) if lam is None else np.asarray(lam, dtype=float),
        zeta=np.zeros(p.m_eq) if zeta is None else np.asarray(zeta, dtype=float),
    )
