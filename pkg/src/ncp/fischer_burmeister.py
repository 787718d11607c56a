from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.core.problem import SQCQPProblem, check_vector, linear_slack, quad_values

# radii below this are treated as the origin
ORIGIN_GUARD = 1e-14

_HALF_SQRT2 = math.sqrt(2.0) / 2.0


@dataclass(frozen=True)
class FBCoefficients:
    u: float
    v: float


def fb_phi(a: float, b: float) -> float:
    """phi(a, b) = sqrt(a^2 + b^2) - a - b; zero iff a >= 0, b >= 0, ab = 0."""
    return math.hypot(a, b) - a - b


def fb_coefficients(a: float, b: float) -> FBCoefficients:
    """Generalized-derivative pair of phi(-g, mu) style rows.

    Row of phi(-f_i(x), mu_i) is u * grad f_i(x)' in x and v in mu_i.
    At the origin the symmetric ball element (1 - sqrt2/2, sqrt2/2 - 1) is used.
    """
    r = math.hypot(a, b)
    if r < ORIGIN_GUARD:
        return FBCoefficients(u=1.0 - _HALF_SQRT2, v=_HALF_SQRT2 - 1.0)
    return FBCoefficients(u=1.0 - a / r, v=b / r - 1.0)


def fb_phi_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.hypot(a, b) - a - b


def fb_coefficients_array(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    r = np.hypot(a, b)
    origin = r < ORIGIN_GUARD
    safe_r = np.where(origin, 1.0, r)
    u = np.where(origin, 1.0 - _HALF_SQRT2, 1.0 - a / safe_r)
    v = np.where(origin, _HALF_SQRT2 - 1.0, b / safe_r - 1.0)
    return u, v


def phi_vec(p: SQCQPProblem, x: np.ndarray, mu: np.ndarray) -> np.ndarray:
    x = check_vector("x", x, p.n)
    mu = check_vector("mu", mu, p.k)
    if p.k == 0:
        return np.zeros(0)
    return fb_phi_array(-quad_values(p, x), mu)


def psi_vec(p: SQCQPProblem, x: np.ndarray, lam: np.ndarray) -> np.ndarray:
    x = check_vector("x", x, p.n)
    lam = check_vector("lam", lam, p.m)
    if p.m == 0:
        return np.zeros(0)
    return fb_phi_array(linear_slack(p, x), lam)
