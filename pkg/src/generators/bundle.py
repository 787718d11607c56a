from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.core.problem import SQCQPProblem, constraint_violation
from src.core.schema import ProblemDocument, dump_problem_document
from src.exceptions import BadDimensions

GROUND_TRUTH_TOL = 1e-9


@dataclass(frozen=True)
class InstanceBundle:
    problem: SQCQPProblem
    family: str
    seed: int
    recommended_tau: float
    x_star: np.ndarray | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def to_document(self) -> ProblemDocument:
        meta = {"family": self.family, "seed": self.seed, "recommended_tau": self.recommended_tau, **self.meta}
        return ProblemDocument.from_problem(self.problem, x_star=self.x_star, meta=meta)

    def to_json(self) -> str:
        return dump_problem_document(self.to_document())


def streams(seed: int, count: int) -> list[np.random.Generator]:
    """Independent generators, one per drawn matrix, in a fixed order."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def check_ground_truth(p: SQCQPProblem, x_star: np.ndarray) -> None:
    nnz = int(np.count_nonzero(x_star))
    if nnz > p.s:
        raise BadDimensions(f"ground truth has {nnz} nonzeros, more than s = {p.s}")
    worst = constraint_violation(p, x_star)["max"]
    if worst > GROUND_TRUTH_TOL:
        raise BadDimensions(f"ground truth violates the constraints by {worst:.3e}")
