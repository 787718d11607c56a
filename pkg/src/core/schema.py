"""JSON instance format.

Matrices are row-major flat arrays; the strings "-inf" / "inf" encode unbounded
box ends. ``x_star`` and ``meta`` are optional.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.core.problem import BoxSet, PrimalDualPoint, QuadraticForm, SQCQPProblem
from src.exceptions import ParseError

BoxEntry = float | str


def _encode_bound(value: float) -> BoxEntry:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(value)


def _decode_bound(value: BoxEntry) -> float:
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf"):
            return math.inf
        if text == "-inf":
            return -math.inf
        raise ValueError(f"unknown bound '{value}', expected a number, 'inf' or '-inf'")
    return float(value)


class QuadraticFormDocument(BaseModel):
    Q: list[float]
    q: list[float]
    c: float = 0.0

    def to_form(self, n: int) -> QuadraticForm:
        return QuadraticForm(Q=np.asarray(self.Q).reshape(n, n), q=np.asarray(self.q), c=self.c)

    @classmethod
    def from_form(cls, form: QuadraticForm) -> QuadraticFormDocument:
        return cls(Q=form.Q.ravel().tolist(), q=form.q.tolist(), c=form.c)


class BoxDocument(BaseModel):
    lower: list[BoxEntry]
    upper: list[BoxEntry]

    @field_validator("lower", "upper")
    @classmethod
    def _check_entries(cls, values: list[BoxEntry]) -> list[BoxEntry]:
        for entry in values:
            _decode_bound(entry)
        return values


class ProblemDocument(BaseModel):
    n: int = Field(ge=1)
    s: int
    k: int = Field(default=0, ge=0)
    m: int = Field(default=0, ge=0)
    m_eq: int = Field(default=0, ge=0)
    objective: QuadraticFormDocument
    quad_constraints: list[QuadraticFormDocument] = Field(default_factory=list)
    A: list[float] = Field(default_factory=list)
    b: list[float] = Field(default_factory=list)
    A_eq: list[float] = Field(default_factory=list)
    b_eq: list[float] = Field(default_factory=list)
    box: BoxDocument
    x_star: list[float] | None = None
    meta: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_shapes(self) -> ProblemDocument:
        n = self.n
        expect: list[tuple[str, int, int]] = [
            ("objective.Q", len(self.objective.Q), n * n),
            ("objective.q", len(self.objective.q), n),
            ("quad_constraints", len(self.quad_constraints), self.k),
            ("A", len(self.A), self.m * n),
            ("b", len(self.b), self.m),
            ("A_eq", len(self.A_eq), self.m_eq * n),
            ("b_eq", len(self.b_eq), self.m_eq),
            ("box.lower", len(self.box.lower), n),
            ("box.upper", len(self.box.upper), n),
        ]
        for i, form in enumerate(self.quad_constraints):
            expect.append((f"quad_constraints[{i}].Q", len(form.Q), n * n))
            expect.append((f"quad_constraints[{i}].q", len(form.q), n))
        if self.x_star is not None:
            expect.append(("x_star", len(self.x_star), n))
        for name, got, want in expect:
            if got != want:
                raise ValueError(f"field '{name}' has {got} entries, expected {want}")
        return self

    def to_problem(self) -> SQCQPProblem:
        n = self.n
        return SQCQPProblem(
            objective=self.objective.to_form(n),
            quad_constraints=tuple(form.to_form(n) for form in self.quad_constraints),
            A=np.asarray(self.A).reshape(self.m, n),
            b=np.asarray(self.b),
            A_eq=np.asarray(self.A_eq).reshape(self.m_eq, n),
            b_eq=np.asarray(self.b_eq),
            box=BoxSet(
                lower=np.array([_decode_bound(v) for v in self.box.lower]),
                upper=np.array([_decode_bound(v) for v in self.box.upper]),
            ),
            s=self.s,
        )

    @classmethod
    def from_problem(
        cls,
        p: SQCQPProblem,
        x_star: np.ndarray | None = None,
        meta: dict[str, Any] | None = None,
    ) -> ProblemDocument:
        return cls(
            n=p.n,
            s=p.s,
            k=p.k,
            m=p.m,
            m_eq=p.m_eq,
            objective=QuadraticFormDocument.from_form(p.objective),
            quad_constraints=[QuadraticFormDocument.from_form(f) for f in p.quad_constraints],
            A=p.A.ravel().tolist(),
            b=p.b.tolist(),
            A_eq=p.A_eq.ravel().tolist(),
            b_eq=p.b_eq.tolist(),
            box=BoxDocument(
                lower=[_encode_bound(v) for v in p.box.lower],
                upper=[_encode_bound(v) for v in p.box.upper],
            ),
            x_star=None if x_star is None else np.asarray(x_star, dtype=float).tolist(),
            meta=dict(meta or {}),
        )


def _describe(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(part) for part in err["loc"]) or "<root>"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def parse_problem_document(text: str) -> ProblemDocument:
    try:
        return ProblemDocument.model_validate_json(text)
    except ValidationError as e:
        raise ParseError(f"invalid instance: {_describe(e)}") from e


def load_problem_document(path: str | Path) -> ProblemDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read instance file {path}: {e}") from e
    return parse_problem_document(text)


def dump_problem_document(doc: ProblemDocument) -> str:
    return json.dumps(doc.model_dump(mode="json"), indent=2) + "\n"


def load_point(path: str | Path, p: SQCQPProblem) -> PrimalDualPoint:
    """Read a candidate point.

    Accepts a bare list (x only, zero multipliers), an object with "x" and
    optionally "nu", "mu", "lam", "zeta", or a solve report (uses "final_point").
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read point file {path}: {e}") from e
    if isinstance(data, list):
        data = {"x": data}
    if not isinstance(data, dict):
        raise ParseError(f"point file {path}: expected a list or an object with field 'x'")
    data = data.get("final_point", data)

    sizes = {"x": p.n, "nu": p.n, "mu": p.k, "lam": p.m, "zeta": p.m_eq}
    fields: dict[str, np.ndarray] = {}
    for name, size in sizes.items():
        raw = data.get(name)
        if raw is None:
            if name == "x":
                raise ParseError(f"point file {path}: missing field 'x'")
            fields[name] = np.zeros(size)
            continue
        try:
            value = np.asarray(raw, dtype=np.float64).reshape(-1)
        except (TypeError, ValueError) as e:
            raise ParseError(f"point file {path}: field '{name}' is not numeric") from e
        if value.shape[0] != size:
            raise ParseError(f"point file {path}: field '{name}' has {value.shape[0]} entries, expected {size}")
        fields[name] = value
    return PrimalDualPoint(**fields)
