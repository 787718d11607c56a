from __future__ import annotations

import json

import pandas as pd
import pytest

from src.bench.runner import (
    CSV_COLUMNS,
    BenchSpec,
    TrialResult,
    load_bench_spec,
    render_markdown,
    run_bench,
    run_trial,
    summarize,
)
from src.exceptions import ParseError

HEADER = "family,n,d,k,m,s,seed_count,relerr_median,fval_median,time_median_s,converged_frac"


def _spec(tmp_path, **overrides) -> BenchSpec:
    data = {
        "family": "recovery-qcqp",
        "grid": [{"n": 10, "d": 30, "s": 2}],
        "seeds": 3,
        "output": str(tmp_path / "bench.csv"),
    }
    data.update(overrides)
    return BenchSpec.model_validate(data)


class TestLoadBenchSpec:
    def test_valid(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"family": "sps-synth", "grid": [{"n": 8, "s": 4}], "seeds": 2}))
        spec = load_bench_spec(path)
        assert spec.seeds == 2 and spec.grid[0].n == 8
        assert spec.init == "sparse"

    def test_empty_grid(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"family": "sps-synth", "grid": [], "seeds": 2}))
        with pytest.raises(ParseError, match="grid"):
            load_bench_spec(path)

    def test_zero_seeds(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"family": "sps-synth", "grid": [{"n": 8, "s": 4}], "seeds": 0}))
        with pytest.raises(ParseError, match="seeds"):
            load_bench_spec(path)

    def test_unknown_family(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"family": "lasso", "grid": [{"n": 8, "s": 4}], "seeds": 1}))
        with pytest.raises(ParseError, match="family"):
            load_bench_spec(path)


class TestRunBench:
    def test_single_cell(self, tmp_path):
        spec = _spec(tmp_path)
        table = run_bench(spec, workers=2)
        assert len(table) == 1
        assert table.loc[0, "seed_count"] == 3
        assert 0.0 <= table.loc[0, "converged_frac"] <= 1.0

        csv_path = tmp_path / "bench.csv"
        assert csv_path.read_text().splitlines()[0] == HEADER
        assert len(pd.read_csv(csv_path)) == 1
        markdown = (tmp_path / "bench.md").read_text().splitlines()
        assert markdown[0].startswith("| family | n | d")
        assert len(markdown) == 3

    def test_output_override(self, tmp_path):
        spec = _spec(tmp_path, seeds=1)
        run_bench(spec, workers=1, output=tmp_path / "out" / "sweep.csv")
        assert (tmp_path / "out" / "sweep.csv").exists()
        assert (tmp_path / "out" / "sweep.md").exists()

    def test_trial_uses_recommended_tau(self, tmp_path):
        spec = _spec(tmp_path)
        result = run_trial(spec, 0, 4)
        assert result.seed == 4 and result.cell == 0
        assert result.relerr >= 0.0

    def test_config_override_wins(self, tmp_path):
        spec = _spec(tmp_path, config={"max_iter": 1})
        result = run_trial(spec, 0, 0)
        assert result.iterations <= 1


class TestSummarize:
    def test_medians(self, tmp_path):
        spec = _spec(tmp_path, grid=[{"n": 10, "s": 2}, {"n": 20, "s": 2}])
        trials = [
            TrialResult(0, 0, "Converged", True, 1e-10, 1.0, 0.1, 3),
            TrialResult(0, 1, "Converged", True, 3e-10, 2.0, 0.3, 4),
            TrialResult(0, 2, "Stalled", False, 2e-10, 6.0, 0.2, 5),
        ]
        table = summarize(spec, trials)
        assert list(table.columns) == CSV_COLUMNS
        row = table.loc[0]
        assert row["relerr_median"] == pytest.approx(2e-10)
        assert row["fval_median"] == pytest.approx(2.0)
        assert row["time_median_s"] == pytest.approx(0.2)
        assert row["converged_frac"] == pytest.approx(2 / 3)
        assert table.loc[1, "seed_count"] == 0

    def test_markdown_table(self, tmp_path):
        spec = _spec(tmp_path)
        table = summarize(spec, [TrialResult(0, 0, "Converged", True, 1e-12, 0.5, 0.01, 2)])
        lines = render_markdown(table).splitlines()
        assert lines[0] == "| " + " | ".join(CSV_COLUMNS) + " |"
        assert lines[2].startswith("| recovery-qcqp | 10 | 30 |")
