from src.bench.runner import (
    CSV_COLUMNS,
    BenchCell,
    BenchSpec,
    TrialResult,
    load_bench_spec,
    render_markdown,
    run_bench,
    run_trial,
    summarize,
)

__all__ = [
    "CSV_COLUMNS",
    "BenchCell",
    "BenchSpec",
    "TrialResult",
    "load_bench_spec",
    "render_markdown",
    "run_bench",
    "run_trial",
    "summarize",
]
