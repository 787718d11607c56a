"""Benchmark sweeps: generate, solve and aggregate medians per grid cell."""

from __future__ import annotations

import asyncio
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from pathlib import Path
from typing import Any, Literal

import numpy as np
import pandas as pd
import structlog
from pydantic import BaseModel, Field, ValidationError

from src.config import build_solver_config
from src.exceptions import ParseError, SQCQPError
from src.generators.metrics import relerr
from src.generators.registry import generate
from src.solver.initial_point import make_initial_point, strategy_from_name
from src.solver.snsqp import snsqp_solve

logger = structlog.get_logger(__name__)

CSV_COLUMNS = [
    "family",
    "n",
    "d",
    "k",
    "m",
    "s",
    "seed_count",
    "relerr_median",
    "fval_median",
    "time_median_s",
    "converged_frac",
]


class BenchCell(BaseModel):
    n: int = Field(ge=1)
    s: int = Field(ge=1)
    d: int | None = Field(default=None, ge=1)
    k: int = Field(default=0, ge=0)
    m: int = Field(default=0, ge=0)
    box_kind: Literal["free", "box22", "nonneg"] = "free"
    snr_db: float = math.inf
    n_y: int | None = Field(default=None, ge=1)
    samples: int | None = Field(default=None, ge=1)


class BenchSpec(BaseModel):
    family: Literal["recovery-simplex", "recovery-qcqp", "scca-synth", "sps-synth"]
    grid: list[BenchCell] = Field(min_length=1)
    seeds: int = Field(ge=1)
    seed_start: int = Field(default=0, ge=0)
    init: str = "sparse"
    config: dict[str, Any] = Field(default_factory=dict)
    output: str = "bench.csv"


@dataclass(frozen=True)
class TrialResult:
    cell: int
    seed: int
    status: str
    converged: bool
    relerr: float
    fval: float
    wall_time: float
    iterations: int


def load_bench_spec(path: str | Path) -> BenchSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read bench spec {path}: {e}") from e
    try:
        return BenchSpec.model_validate_json(text)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
        )
        raise ParseError(f"invalid bench spec: {problems}") from e


def run_trial(spec: BenchSpec, cell_index: int, seed: int) -> TrialResult:
    cell = spec.grid[cell_index]
    bundle = generate(
        spec.family,
        n=cell.n,
        s=cell.s,
        seed=seed,
        d=cell.d,
        k=cell.k,
        m=cell.m,
        box_kind=cell.box_kind,
        snr_db=cell.snr_db,
        n_y=cell.n_y,
        samples=cell.samples,
    )
    overrides = {"tau": bundle.recommended_tau, "seed": seed, **spec.config}
    config = build_solver_config(**overrides)
    Y0 = make_initial_point(bundle.problem, strategy_from_name(spec.init, bundle.meta), config)
    report = snsqp_solve(bundle.problem, Y0, config)
    error = relerr(report.x, bundle.x_star) if bundle.x_star is not None else math.nan
    return TrialResult(
        cell=cell_index,
        seed=seed,
        status=report.status,
        converged=report.converged,
        relerr=error,
        fval=bundle.problem.objective.value(report.x),
        wall_time=report.wall_time,
        iterations=report.iterations,
    )


async def run_bench_async(spec: BenchSpec, workers: int) -> list[TrialResult]:
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        tasks = [
            loop.run_in_executor(pool, partial(run_trial, spec, cell, spec.seed_start + trial))
            for cell in range(len(spec.grid))
            for trial in range(spec.seeds)
        ]
        results = await asyncio.gather(*tasks, return_exceptions=True)

    trials: list[TrialResult] = []
    for res in results:
        if isinstance(res, SQCQPError):
            logger.error("bench_trial_failed", error=str(res))
        elif isinstance(res, Exception):
            raise res
        else:
            trials.append(res)
    return trials


def summarize(spec: BenchSpec, trials: list[TrialResult]) -> pd.DataFrame:
    """One row per grid cell with medians over its seeds."""
    frame = pd.DataFrame([asdict(t) for t in trials], columns=list(TrialResult.__dataclass_fields__))
    rows = []
    for index, cell in enumerate(spec.grid):
        group = frame[frame["cell"] == index]
        rows.append(
            {
                "family": spec.family,
                "n": cell.n,
                "d": cell.d if cell.d is not None else 0,
                "k": cell.k,
                "m": cell.m,
                "s": cell.s,
                "seed_count": int(len(group)),
                "relerr_median": group["relerr"].median() if len(group) else math.nan,
                "fval_median": group["fval"].median() if len(group) else math.nan,
                "time_median_s": group["wall_time"].median() if len(group) else math.nan,
                "converged_frac": float(group["converged"].mean()) if len(group) else 0.0,
            }
        )
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "-"
        return f"{value:.3g}" if abs(value) >= 1e-3 or value == 0.0 else f"{value:.2e}"
    return str(value)


def render_markdown(table: pd.DataFrame) -> str:
    header = "| " + " | ".join(CSV_COLUMNS) + " |"
    rule = "| " + " | ".join("---" for _ in CSV_COLUMNS) + " |"
    lines = [header, rule]
    for record in table.to_dict(orient="records"):
        lines.append("| " + " | ".join(_fmt(record[col]) for col in CSV_COLUMNS) + " |")
    return "\n".join(lines) + "\n"


def run_bench(spec: BenchSpec, workers: int = 1, output: str | Path | None = None) -> pd.DataFrame:
    """Run every cell, write the CSV and a markdown table next to it."""
    trials = asyncio.run(run_bench_async(spec, workers))
    table = summarize(spec, trials)

    csv_path = Path(output or spec.output)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(csv_path, index=False)
    csv_path.with_suffix(".md").write_text(render_markdown(table), encoding="utf-8")
    logger.info(
        "bench_finished",
        family=spec.family,
        cells=len(spec.grid),
        trials=len(trials),
        csv=str(csv_path),
        converged=float(np.mean([t.converged for t in trials])) if trials else 0.0,
    )
    return table
