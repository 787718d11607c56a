"""Problem and primal-dual point types for sparse QCQPs.

The model is

    min  f_0(x)
    s.t. f_i(x) <= 0        i = 1..k   (quadratic)
         A x <= b                      (linear inequalities)
         A_eq x = b_eq                 (linear equalities)
         x in X = X_1 x ... x X_n,  0 in X_i
         ||x||_0 <= s

with f_i(x) = 1/2 x'Q_i x + q_i'x + c_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import structlog

from src.exceptions import BadSparsityBound, BoxExcludesZero, DimensionMismatch

logger = structlog.get_logger(__name__)

SYMMETRY_RTOL = 1e-12


def _freeze(array: np.ndarray) -> np.ndarray:
    frozen = np.array(array, dtype=np.float64, copy=True)
    frozen.setflags(write=False)
    return frozen


def _matrix(value, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.size == 0:
        if rows:
            raise DimensionMismatch(f"empty constraint matrix for a right-hand side of length {rows}")
        return np.zeros((0, cols or 0))
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class QuadraticForm:
    """f(x) = 1/2 x'Qx + q'x + c, with Q stored symmetrized."""

    Q: np.ndarray
    q: np.ndarray
    c: float = 0.0

    def __post_init__(self) -> None:
        Q = np.asarray(self.Q, dtype=np.float64)
        q = np.asarray(self.q, dtype=np.float64).reshape(-1)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise DimensionMismatch(f"Q must be square, got shape {Q.shape}")
        if Q.shape[0] != q.shape[0]:
            raise DimensionMismatch(f"Q is {Q.shape[0]}x{Q.shape[1]} but q has length {q.shape[0]}")

        asym = float(np.max(np.abs(Q - Q.T))) if Q.size else 0.0
        scale = max(float(np.max(np.abs(Q))), 1.0) if Q.size else 1.0
        if asym > SYMMETRY_RTOL * scale:
            logger.warning("quadratic_form_symmetrized", asymmetry=asym)
        Q = 0.5 * (Q + Q.T)

        object.__setattr__(self, "Q", _freeze(Q))
        object.__setattr__(self, "q", _freeze(q))
        object.__setattr__(self, "c", float(self.c))

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def value(self, x: np.ndarray) -> float:
        return float(0.5 * x @ (self.Q @ x) + self.q @ x + self.c)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.Q @ x + self.q

    @classmethod
    def zeros(cls, n: int) -> QuadraticForm:
        return cls(Q=np.zeros((n, n)), q=np.zeros(n), c=0.0)


@dataclass(frozen=True)
class BoxSet:
    """Product of closed intervals; +-inf marks an unbounded end."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=np.float64).reshape(-1)
        upper = np.asarray(self.upper, dtype=np.float64).reshape(-1)
        if lower.shape != upper.shape:
            raise DimensionMismatch(
                f"box lower has length {lower.shape[0]} but upper has length {upper.shape[0]}"
            )
        object.__setattr__(self, "lower", _freeze(lower))
        object.__setattr__(self, "upper", _freeze(upper))

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    @classmethod
    def free(cls, n: int) -> BoxSet:
        return cls(lower=np.full(n, -np.inf), upper=np.full(n, np.inf))

    @classmethod
    def uniform(cls, n: int, lower: float, upper: float) -> BoxSet:
        return cls(lower=np.full(n, lower), upper=np.full(n, upper))

    def restrict(self, indices: np.ndarray) -> BoxSet:
        return BoxSet(lower=self.lower[indices], upper=self.upper[indices])

    def capped(self, cap: float) -> BoxSet:
        """Replace infinite ends by -cap / +cap."""
        return BoxSet(lower=np.maximum(self.lower, -cap), upper=np.minimum(self.upper, cap))


@dataclass(frozen=True)
class SQCQPProblem:
    objective: QuadraticForm
    box: BoxSet
    s: int
    quad_constraints: tuple[QuadraticForm, ...] = ()
    A: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    b: np.ndarray = field(default_factory=lambda: np.zeros(0))
    A_eq: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    b_eq: np.ndarray = field(default_factory=lambda: np.zeros(0))
    sense: str = "minimize"

    def __post_init__(self) -> None:
        n = self.objective.n
        b = np.asarray(self.b, dtype=np.float64).reshape(-1)
        b_eq = np.asarray(self.b_eq, dtype=np.float64).reshape(-1)
        A = _matrix(self.A, b.shape[0], n)
        A_eq = _matrix(self.A_eq, b_eq.shape[0], n)
        object.__setattr__(self, "quad_constraints", tuple(self.quad_constraints))
        object.__setattr__(self, "A", _freeze(A))
        object.__setattr__(self, "b", _freeze(b))
        object.__setattr__(self, "A_eq", _freeze(A_eq))
        object.__setattr__(self, "b_eq", _freeze(b_eq))
        object.__setattr__(self, "s", int(self.s))

    @property
    def n(self) -> int:
        return self.objective.n

    @property
    def k(self) -> int:
        return len(self.quad_constraints)

    @property
    def m(self) -> int:
        return self.b.shape[0]

    @property
    def m_eq(self) -> int:
        return self.b_eq.shape[0]

    @property
    def p_dim(self) -> int:
        """Length of the full stationary system, 2n + k + m + m_eq."""
        return 2 * self.n + self.k + self.m + self.m_eq

    @property
    def q_dim(self) -> int:
        """Order of the reduced Newton matrix, 2s + k + m + m_eq."""
        return 2 * self.s + self.k + self.m + self.m_eq

    def with_sparsity(self, s: int) -> SQCQPProblem:
        return replace(self, s=s)


@dataclass(frozen=True)
class PrimalDualPoint:
    """Y = (x, nu, mu, lam, zeta)."""

    x: np.ndarray
    nu: np.ndarray
    mu: np.ndarray
    lam: np.ndarray
    zeta: np.ndarray

    def __post_init__(self) -> None:
        for name in ("x", "nu", "mu", "lam", "zeta"):
            value = np.asarray(getattr(self, name), dtype=np.float64).reshape(-1)
            object.__setattr__(self, name, _freeze(value))

    @classmethod
    def zeros_for(cls, p: SQCQPProblem) -> PrimalDualPoint:
        return cls(
            x=np.zeros(p.n), nu=np.zeros(p.n), mu=np.zeros(p.k), lam=np.zeros(p.m), zeta=np.zeros(p.m_eq)
        )

    def norm_squared(self) -> float:
        return float(
            self.x @ self.x + self.nu @ self.nu + self.mu @ self.mu + self.lam @ self.lam + self.zeta @ self.zeta
        )

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def replace(self, **changes: np.ndarray) -> PrimalDualPoint:
        return replace(self, **changes)


def check_point(p: SQCQPProblem, Y: PrimalDualPoint) -> None:
    expected = {"x": p.n, "nu": p.n, "mu": p.k, "lam": p.m, "zeta": p.m_eq}
    for name, size in expected.items():
        got = getattr(Y, name).shape[0]
        if got != size:
            raise DimensionMismatch(f"point field '{name}' has length {got}, problem expects {size}")


def check_vector(name: str, v: np.ndarray, size: int) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64).reshape(-1)
    if arr.shape[0] != size:
        raise DimensionMismatch(f"'{name}' has length {arr.shape[0]}, expected {size}")
    return arr


def validate_problem(p: SQCQPProblem) -> None:
    """Raise if any structural invariant of the instance is broken."""
    n = p.n
    if p.box.n != n:
        raise DimensionMismatch(f"box has dimension {p.box.n}, objective has {n}")
    for i, form in enumerate(p.quad_constraints):
        if form.n != n:
            raise DimensionMismatch(f"quad_constraints[{i}] has dimension {form.n}, expected {n}")
    if p.A.shape != (p.m, n):
        raise DimensionMismatch(f"A has shape {p.A.shape}, expected ({p.m}, {n})")
    if p.A_eq.shape != (p.m_eq, n):
        raise DimensionMismatch(f"A_eq has shape {p.A_eq.shape}, expected ({p.m_eq}, {n})")
    if p.sense != "minimize":
        raise DimensionMismatch(f"unsupported sense '{p.sense}'")

    bad = np.flatnonzero((p.box.lower > 0.0) | (p.box.upper < 0.0) | (p.box.lower > p.box.upper))
    if bad.size:
        i = int(bad[0])
        raise BoxExcludesZero(
            f"X_{i} = [{p.box.lower[i]}, {p.box.upper[i]}] does not contain 0 ({bad.size} offending coordinates)"
        )

    if p.s < 1 or p.s > n:
        raise BadSparsityBound(f"s = {p.s} outside [1, {n}]")


# --- constraint evaluation ---


def quad_values(p: SQCQPProblem, x: np.ndarray) -> np.ndarray:
    return np.array([form.value(x) for form in p.quad_constraints], dtype=np.float64)


def quad_gradients(p: SQCQPProblem, x: np.ndarray) -> np.ndarray:
    """B = [grad f_1(x), ..., grad f_k(x)] as an n x k matrix."""
    if p.k == 0:
        return np.zeros((p.n, 0))
    return np.column_stack([form.gradient(x) for form in p.quad_constraints])


def linear_slack(p: SQCQPProblem, x: np.ndarray) -> np.ndarray:
    """b - A x (nonnegative when feasible)."""
    return p.b - p.A @ x


def equality_residual(p: SQCQPProblem, x: np.ndarray) -> np.ndarray:
    return p.A_eq @ x - p.b_eq


def constraint_violation(p: SQCQPProblem, x: np.ndarray) -> dict[str, float]:
    """Largest violation per constraint family (0 when satisfied)."""
    x = check_vector("x", x, p.n)
    quad = quad_values(p, x)
    slack = linear_slack(p, x)
    eq = equality_residual(p, x)
    box = np.maximum(p.box.lower - x, 0.0) + np.maximum(x - p.box.upper, 0.0)
    violations = {
        "quadratic": float(np.max(quad, initial=0.0)),
        "linear": float(np.max(-slack, initial=0.0)),
        "equality": float(np.max(np.abs(eq), initial=0.0)),
        "box": float(np.max(box, initial=0.0)),
    }
    violations["max"] = max(violations.values())
    return violations
