"""Generalized Jacobian of F(Y; T).

The reduced matrix G acts on d_K = (d^x_T, d^mu, d^lam, d^nu_T, d^zeta) and its
rows follow the K-rows of the residual (grad_T, proj, phi, psi, eq):

    [ H_TT      B_T   A_T'  I    E_T' ]
    [ I - C     0     0     -C   0    ]
    [ U1 B_T'   V1    0     0    0    ]
    [ U2 A_T    0     V2    0    0    ]
    [ E_T       0     0     0    0    ]

D couples the off-support primal block x_Tbar into the same rows and is only
ever applied to its nonzero columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import svdvals

from src.core.lagrangian import hessian_block
from src.core.problem import PrimalDualPoint, SQCQPProblem, check_point, check_vector, linear_slack, quad_values
from src.exceptions import DimensionMismatch
from src.ncp.fischer_burmeister import fb_coefficients_array
from src.projection.operators import SupportSet, box_derivative_array

CLASSIFY_TOL = 1e-10


@dataclass(frozen=True)
class IndexClassification:
    eta1: np.ndarray
    theta1: np.ndarray
    beta1: np.ndarray
    eta2: np.ndarray
    theta2: np.ndarray
    beta2: np.ndarray
    eta3: np.ndarray
    theta3: np.ndarray
    beta3: np.ndarray

    def summary(self) -> dict[str, int]:
        return {name: int(getattr(self, name).size) for name in self.__dataclass_fields__}


@dataclass(frozen=True)
class JacobianBlocks:
    support: SupportSet
    H_TT: np.ndarray
    B_T: np.ndarray
    C: np.ndarray
    U1: np.ndarray
    V1: np.ndarray
    U2: np.ndarray
    V2: np.ndarray
    A_T: np.ndarray
    E_T: np.ndarray
    G: np.ndarray

    @property
    def q(self) -> int:
        return self.G.shape[0]


def _partition(multiplier: np.ndarray, slack: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split indices of a complementarity pair (slack >= 0, multiplier >= 0)."""
    eta = (np.abs(multiplier) <= tol) & (slack > tol)
    beta = (multiplier > tol) & (np.abs(slack) <= tol)
    theta = ~(eta | beta)
    return np.flatnonzero(eta), np.flatnonzero(theta), np.flatnonzero(beta)


def classify_indices(
    p: SQCQPProblem, Y: PrimalDualPoint, T: SupportSet, tol: float = CLASSIFY_TOL
) -> IndexClassification:
    check_point(p, Y)
    eta1, theta1, beta1 = _partition(Y.mu, -quad_values(p, Y.x), tol)
    eta2, theta2, beta2 = _partition(Y.lam, linear_slack(p, Y.x), tol)

    t = T.indices
    x_t, nu_t = Y.x[t], Y.nu[t]
    lower, upper = p.box.lower[t], p.box.upper[t]
    interior = (x_t > lower + tol) & (x_t < upper - tol)
    on_bound = (np.abs(x_t - lower) <= tol) | (np.abs(x_t - upper) <= tol)
    eta3_mask = (np.abs(nu_t) <= tol) & interior
    beta3_mask = (np.abs(nu_t) > tol) & on_bound
    theta3_mask = ~(eta3_mask | beta3_mask)
    return IndexClassification(
        eta1=eta1,
        theta1=theta1,
        beta1=beta1,
        eta2=eta2,
        theta2=theta2,
        beta2=beta2,
        eta3=t[eta3_mask],
        theta3=t[theta3_mask],
        beta3=t[beta3_mask],
    )


def _fb_rows(p: SQCQPProblem, Y: PrimalDualPoint) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    U1, V1 = fb_coefficients_array(-quad_values(p, Y.x), Y.mu)
    U2, V2 = fb_coefficients_array(linear_slack(p, Y.x), Y.lam)
    return U1, V1, U2, V2


def _quad_gradient_rows(p: SQCQPProblem, x: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """[grad f_i(x)]_rows for all i, as a len(rows) x k matrix."""
    if p.k == 0:
        return np.zeros((rows.size, 0))
    return np.column_stack([form.Q[rows] @ x + form.q[rows] for form in p.quad_constraints])


def assemble_G(p: SQCQPProblem, Y: PrimalDualPoint, T: SupportSet) -> JacobianBlocks:
    check_point(p, Y)
    if len(T) != p.s:
        raise DimensionMismatch(f"support has {len(T)} indices, expected s = {p.s}")
    s, k, m, m_eq = p.s, p.k, p.m, p.m_eq
    t = T.indices

    H_TT = hessian_block(p, Y.mu, t, t)
    B_T = _quad_gradient_rows(p, Y.x, t)
    C = box_derivative_array(Y.x[t] + Y.nu[t], p.box.lower[t], p.box.upper[t])
    U1, V1, U2, V2 = _fb_rows(p, Y)
    A_T = p.A[:, t]
    E_T = p.A_eq[:, t]

    # column offsets: x_T | mu | lam | nu_T | zeta
    cx, cmu, clam, cnu, cz = 0, s, s + k, s + k + m, 2 * s + k + m
    # row offsets: grad_T | proj | phi | psi | eq
    rg, rp, rphi, rpsi, req = 0, s, 2 * s, 2 * s + k, 2 * s + k + m
    q = p.q_dim
    G = np.zeros((q, q))

    G[rg:rp, cx:cmu] = H_TT
    G[rg:rp, cmu:clam] = B_T
    G[rg:rp, clam:cnu] = A_T.T
    G[rg:rp, cnu:cz] = np.eye(s)
    G[rg:rp, cz:] = E_T.T

    G[rp:rphi, cx:cmu] = np.diag(1.0 - C)
    G[rp:rphi, cnu:cz] = -np.diag(C)

    G[rphi:rpsi, cx:cmu] = U1[:, None] * B_T.T
    G[rphi:rpsi, cmu:clam] = np.diag(V1)

    G[rpsi:req, cx:cmu] = U2[:, None] * A_T
    G[rpsi:req, clam:cnu] = np.diag(V2)

    G[req:, cx:cmu] = E_T

    return JacobianBlocks(
        support=T, H_TT=H_TT, B_T=B_T, C=C, U1=U1, V1=V1, U2=U2, V2=V2, A_T=A_T, E_T=E_T, G=G
    )


def apply_D_sparse(
    p: SQCQPProblem,
    Y: PrimalDualPoint,
    T: SupportSet,
    x_comp: np.ndarray,
    blocks: JacobianBlocks | None = None,
) -> np.ndarray:
    """D x_comp, touching only the nonzero columns of x_comp."""
    check_point(p, Y)
    tc = T.complement(p.n)
    x_comp = check_vector("x_comp", x_comp, tc.size)
    out = np.zeros(p.q_dim)
    nz = np.flatnonzero(x_comp)
    if nz.size == 0:
        return out

    s, k, m = p.s, p.k, p.m
    cols = tc[nz]
    vals = x_comp[nz]
    if blocks is None:
        U1, _, U2, _ = _fb_rows(p, Y)
    else:
        U1, U2 = blocks.U1, blocks.U2

    out[:s] = hessian_block(p, Y.mu, T.indices, cols) @ vals
    if k:
        out[2 * s : 2 * s + k] = U1 * (_quad_gradient_rows(p, Y.x, cols).T @ vals)
    if m:
        out[2 * s + k : 2 * s + k + m] = U2 * (p.A[:, cols] @ vals)
    if p.m_eq:
        out[2 * s + k + m :] = p.A_eq[:, cols] @ vals
    return out


def assemble_D_dense(p: SQCQPProblem, Y: PrimalDualPoint, T: SupportSet) -> np.ndarray:
    """Materialized q x (n - s) coupling matrix; for diagnostics only."""
    tc = T.complement(p.n)
    D = np.zeros((p.q_dim, tc.size))
    for j in range(tc.size):
        e = np.zeros(tc.size)
        e[j] = 1.0
        D[:, j] = apply_D_sparse(p, Y, T, e)
    return D


def apply_W(
    p: SQCQPProblem,
    Y: PrimalDualPoint,
    T: SupportSet,
    d: np.ndarray,
    blocks: JacobianBlocks | None = None,
) -> np.ndarray:
    """W d without forming W.

    ``d`` is laid out as (d^x_T; d^x_Tbar; d^nu_T; d^nu_Tbar; d^mu; d^lam; d^zeta);
    the result follows the row order of the residual vector.
    """
    check_point(p, Y)
    n, s, k, m = p.n, p.s, p.k, p.m
    d = check_vector("d", d, p.p_dim)
    if blocks is None:
        blocks = assemble_G(p, Y, T)

    nc = n - s
    offsets = np.cumsum([0, s, nc, s, nc, k, m, p.m_eq])
    dx_t, dx_c, dnu_t, dnu_c, dmu, dlam, dzeta = (
        d[offsets[i] : offsets[i + 1]] for i in range(len(offsets) - 1)
    )

    d_K = np.concatenate([dx_t, dmu, dlam, dnu_t, dzeta])
    out_K = blocks.G @ d_K + apply_D_sparse(p, Y, T, dx_c, blocks)
    grad_T, proj = out_K[:s], out_K[s : 2 * s]
    rest = out_K[2 * s :]
    return np.concatenate([grad_T, dx_c, proj, dnu_c, rest])


def smallest_singular_value(G: np.ndarray) -> float:
    G = np.asarray(G, dtype=np.float64)
    if G.size == 0:
        return 0.0
    return float(np.min(svdvals(G)))
