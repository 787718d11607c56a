"""Projections onto the sparse set and the box, and support selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, islice

import numpy as np
import structlog

from src.core.lagrangian import lagrangian_gradient
from src.core.problem import BoxSet, PrimalDualPoint, SQCQPProblem, check_point, check_vector
from src.exceptions import BadSparsityBound, CapExceeded, DimensionMismatch

logger = structlog.get_logger(__name__)

# magnitudes closer than this are treated as tied
TIE_TOL = 1e-12


@dataclass(frozen=True)
class SupportSet:
    """Sorted, duplicate-free index set T of size s. The complement is derived."""

    indices: np.ndarray

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        if idx.size > 1 and np.any(np.diff(idx) <= 0):
            raise DimensionMismatch(f"support indices must be strictly increasing, got {idx.tolist()}")
        idx = idx.copy()
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return int(self.indices.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SupportSet):
            return NotImplemented
        return np.array_equal(self.indices, other.indices)

    def __hash__(self) -> int:
        return hash(tuple(self.indices.tolist()))

    def complement(self, n: int) -> np.ndarray:
        mask = np.ones(n, dtype=bool)
        mask[self.indices] = False
        return np.flatnonzero(mask)

    def mask(self, n: int) -> np.ndarray:
        mask = np.zeros(n, dtype=bool)
        mask[self.indices] = True
        return mask

    def to_list(self) -> list[int]:
        return self.indices.tolist()

    @classmethod
    def of(cls, indices) -> SupportSet:
        return cls(np.sort(np.asarray(indices, dtype=np.int64)))


@dataclass(frozen=True)
class SupportEnumeration:
    supports: list[SupportSet]
    truncated: bool = False


def _top_s(values: np.ndarray, s: int) -> np.ndarray:
    # stable sort on -|v| keeps the smaller index first among equal magnitudes
    order = np.argsort(-np.abs(values), kind="stable")
    return np.sort(order[:s])


def project_sparse(x: np.ndarray, s: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    n = x.shape[0]
    if s < 1 or s > n:
        raise BadSparsityBound(f"s = {s} outside [1, {n}]")
    out = np.zeros(n)
    keep = _top_s(x, s)
    out[keep] = x[keep]
    return out


def project_box(z: np.ndarray, box: BoxSet) -> np.ndarray:
    z = check_vector("z", z, box.n)
    return np.minimum(box.upper, np.maximum(box.lower, z))


def box_derivative(z_i: float, lower_i: float, upper_i: float) -> float:
    """Element of the generalized derivative of the clamp; 0 at a finite bound."""
    return 1.0 if lower_i < z_i < upper_i else 0.0


def box_derivative_array(z: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    return ((lower < z) & (z < upper)).astype(np.float64)


def support_scores(p: SQCQPProblem, Y: PrimalDualPoint, tau: float) -> np.ndarray:
    """u = x - tau * (grad_x L + nu)."""
    check_point(p, Y)
    return Y.x - tau * (lagrangian_gradient(p, Y) + Y.nu)


def select_support(p: SQCQPProblem, Y: PrimalDualPoint, tau: float) -> SupportSet:
    u = support_scores(p, Y, tau)
    return SupportSet(_top_s(u, p.s))


def enumerate_supports(
    p: SQCQPProblem, Y: PrimalDualPoint, tau: float, cap: int = 50, strict: bool = False
) -> SupportEnumeration:
    """Every top-s index set of |u|, honouring ties at the s-th magnitude.

    Returns at most ``cap`` sets; ``truncated`` is set when more exist, or
    CapExceeded is raised instead when ``strict``.
    """
    if cap < 1:
        raise CapExceeded(f"cap must be >= 1, got {cap}")
    u = np.abs(support_scores(p, Y, tau))
    s = p.s
    threshold = np.sort(u)[::-1][s - 1]

    definite = np.flatnonzero(u >= threshold + TIE_TOL)
    tied = np.flatnonzero(np.abs(u - threshold) < TIE_TOL)
    free_slots = s - definite.size

    total = math.comb(tied.size, free_slots)
    supports = [
        SupportSet(np.sort(np.concatenate([definite, np.asarray(extra, dtype=np.int64)])))
        for extra in islice(combinations(tied.tolist(), free_slots), cap)
    ]
    truncated = total > cap
    if truncated:
        if strict:
            raise CapExceeded(f"{total} tied supports exceed cap {cap}")
        logger.warning("support_enumeration_truncated", total=total, cap=cap)
    return SupportEnumeration(supports=supports, truncated=truncated)
