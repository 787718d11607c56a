"""Sparse canonical correlation analysis as a sparse QCQP.

With x = (w_x; w_y) the relaxation maximizes 2 <w_x, S_xy w_y> subject to
<w_x, S_xx w_x> + <w_y, S_yy w_y> <= 2. It is stored as a minimization:
objective Q = -2 [[0, S_xy], [S_xy', 0]], one constraint Q = 2 diag(S_xx, S_yy)
with c = -2.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from src.core.problem import BoxSet, QuadraticForm, SQCQPProblem
from src.exceptions import BadDimensions, ParseError, ShapeMismatch
from src.generators.bundle import InstanceBundle, streams

logger = structlog.get_logger(__name__)

NOISE_STD = 0.1
TAU_GRID = tuple(round(0.001 * i, 3) for i in range(1, 11))
DEFAULT_TAU = 0.005
CONSTANT_TOL = 1e-12


def scca_problem(X: np.ndarray, Y: np.ndarray, s: int) -> SQCQPProblem:
    n_x, n_y = X.shape[0], Y.shape[0]
    n = n_x + n_y
    if s < 1 or s > n:
        raise BadDimensions(f"s = {s} outside [1, {n}]")
    S_xy = X @ Y.T
    cross = np.zeros((n, n))
    cross[:n_x, n_x:] = S_xy
    cross[n_x:, :n_x] = S_xy.T
    scale = np.zeros((n, n))
    scale[:n_x, :n_x] = X @ X.T
    scale[n_x:, n_x:] = Y @ Y.T
    return SQCQPProblem(
        objective=QuadraticForm(Q=-2.0 * cross, q=np.zeros(n)),
        quad_constraints=(QuadraticForm(Q=2.0 * scale, q=np.zeros(n), c=-2.0),),
        box=BoxSet.free(n),
        s=s,
    )


def covariance_blocks(p: SQCQPProblem, n_x: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Recover (S_xy, S_xx, S_yy) from a stored SCCA problem."""
    if p.k < 1 or n_x < 1 or n_x >= p.n:
        raise ShapeMismatch(f"not an SCCA instance with n_x = {n_x} (n = {p.n}, k = {p.k})")
    S_xy = -0.5 * p.objective.Q[:n_x, n_x:]
    Q1 = p.quad_constraints[0].Q
    return S_xy, 0.5 * Q1[:n_x, :n_x], 0.5 * Q1[n_x:, n_x:]


def signal_patterns(n_x: int, n_y: int) -> tuple[np.ndarray, np.ndarray]:
    """x side: (1; -1; 0) with blocks of n_x/8 at the front; y side: (0; 1; -1)
    with blocks of n_y // 8 at the back."""
    bx = n_x // 8
    by = n_y // 8
    px = np.zeros(n_x)
    px[:bx] = 1.0
    px[bx : 2 * bx] = -1.0
    py = np.zeros(n_y)
    py[n_y - 2 * by : n_y - by] = 1.0
    py[n_y - by :] = -1.0
    return px, py


def gen_scca_synthetic(n_x: int, n_y: int, N: int, s: int, seed: int) -> InstanceBundle:
    """Rank-one data X = (p_x + eps) u', Y = (p_y + eps') u'. Streams: eps, eps', u."""
    if n_x < 8 or n_x % 8:
        raise BadDimensions(f"n_x must be a positive multiple of 8, got {n_x}")
    if n_y < 8:
        raise BadDimensions(f"n_y must be at least 8, got {n_y}")
    if N < 1:
        raise BadDimensions(f"N must be positive, got {N}")
    rng_ex, rng_ey, rng_u = streams(seed, 3)

    px, py = signal_patterns(n_x, n_y)
    eps_x = rng_ex.normal(0.0, NOISE_STD, n_x)
    eps_y = rng_ey.normal(0.0, NOISE_STD, n_y)
    u = rng_u.standard_normal(N)
    X = np.outer(px + eps_x, u)
    Y = np.outer(py + eps_y, u)

    logger.debug("instance_generated", family="scca-synth", n_x=n_x, n_y=n_y, N=N, s=s, seed=seed)
    return InstanceBundle(
        problem=scca_problem(X, Y, s),
        family="scca-synth",
        seed=seed,
        recommended_tau=DEFAULT_TAU,
        meta={"n_x": n_x, "n_y": n_y, "N": N, "tau_grid": list(TAU_GRID)},
    )


def _read_matrix(path: str | Path) -> np.ndarray:
    try:
        frame = pd.read_csv(path, header=None, dtype=str, skipinitialspace=True)
    except (OSError, pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise ParseError(f"cannot read CSV {path}: {e}") from e
    if frame.empty:
        raise ParseError(f"CSV {path} has no data rows")

    # header row: any non-numeric cell in the first row
    first = pd.to_numeric(frame.iloc[0], errors="coerce")
    if first.isna().any():
        frame = frame.iloc[1:]
        if frame.empty:
            raise ParseError(f"CSV {path} has a header but no data rows")

    numeric = frame.apply(pd.to_numeric, errors="coerce")
    missing = numeric.isna().to_numpy()
    if missing.any():
        row, col = np.argwhere(missing)[0]
        raise ParseError(f"CSV {path}: non-numeric or missing value at data row {row + 1}, column {col + 1}")
    return numeric.to_numpy(dtype=np.float64)


def normalize_samples(M: np.ndarray, name: str = "data") -> np.ndarray:
    """Each column (sample) to mean zero and unit variance; constant columns become zero."""
    mean = M.mean(axis=0)
    std = M.std(axis=0)
    constant = std <= CONSTANT_TOL
    if np.any(constant):
        logger.warning("constant_samples_zeroed", matrix=name, columns=np.flatnonzero(constant).tolist())
    safe = np.where(constant, 1.0, std)
    out = (M - mean) / safe
    out[:, constant] = 0.0
    return out


def scca_from_csv(path_x: str | Path, path_y: str | Path, s: int) -> InstanceBundle:
    """Rows are variables, columns are samples; both files need the same sample count."""
    X = _read_matrix(path_x)
    Y = _read_matrix(path_y)
    if X.shape[1] != Y.shape[1]:
        raise ShapeMismatch(f"X has {X.shape[1]} samples but Y has {Y.shape[1]}")
    X = normalize_samples(X, "X")
    Y = normalize_samples(Y, "Y")
    return InstanceBundle(
        problem=scca_problem(X, Y, s),
        family="scca-csv",
        seed=0,
        recommended_tau=DEFAULT_TAU,
        meta={"n_x": X.shape[0], "n_y": Y.shape[0], "N": X.shape[1], "tau_grid": list(TAU_GRID)},
    )
