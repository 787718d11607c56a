from __future__ import annotations

import re
from pathlib import Path

import pytest

DOCS = Path(__file__).resolve().parent.parent / "docs"
MODULES = ("core", "ncp", "projection", "stationary", "jacobian", "solver", "oracle", "generators", "cli", "docs")


def _sections(text: str) -> dict[str, str]:
    parts = re.split(r"^## (\w+)\s*$", text, flags=re.MULTILINE)
    return {name: body for name, body in zip(parts[1::2], parts[2::2])}


@pytest.mark.parametrize("name", ["algorithm.md", "file_formats.md", "benchmarks.md", "decisions.md"])
def test_page_exists(name):
    page = DOCS / name
    assert page.exists()
    assert page.read_text(encoding="utf-8").startswith("# ")


class TestDecisionsLedger:
    @pytest.fixture(scope="class")
    def sections(self) -> dict[str, str]:
        return _sections((DOCS / "decisions.md").read_text(encoding="utf-8"))

    def test_every_module_listed(self, sections):
        assert set(MODULES) <= set(sections)

    @pytest.mark.parametrize("module", MODULES)
    def test_headers(self, sections, module):
        body = sections[module]
        decisions = body.find("### Design decisions")
        questions = body.find("### Open questions")
        assert 0 <= decisions < questions

    @pytest.mark.parametrize("module", MODULES)
    def test_no_empty_subsection(self, sections, module):
        for chunk in re.split(r"^### .*$", sections[module], flags=re.MULTILINE)[1:]:
            assert re.search(r"^- ", chunk, flags=re.MULTILINE)

    @pytest.mark.parametrize("module", MODULES)
    def test_every_question_resolved(self, sections, module):
        questions = sections[module].split("### Open questions", 1)[1]
        items = re.split(r"^- ", questions, flags=re.MULTILINE)[1:]
        for item in items:
            if item.startswith("Question:"):
                assert "Resolution:" in item

    @pytest.mark.parametrize(
        ("module", "phrases"),
        [
            ("core", ["0 ∈ X_i", "BoxExcludesZero"]),
            ("stationary", ["global flattening", "grad_T, x_comp, proj, nu_comp, phi, psi, eq"]),
            ("jacobian", ["(I−C, 0, 0, 0, −C, 0)", "`c = 0` at kinks"]),
            ("solver", ["σ=0.5", "sigma = 0.45", "⟨F, Wd⟩ ≥ 0", "degenerate_steps", "Stalled"]),
            ("generators", ["⟨x,1⟩=1", "A_eq = 1'", "n_y // 8"]),
        ],
    )
    def test_resolutions_recorded(self, sections, module, phrases):
        questions = " ".join(sections[module].split("### Open questions", 1)[1].split())
        for phrase in phrases:
            assert phrase in questions

    @pytest.mark.parametrize("module", ["ncp", "projection", "oracle", "cli", "docs"])
    def test_no_open_questions(self, sections, module):
        questions = sections[module].split("### Open questions", 1)[1]
        assert re.search(r"^- none", questions, flags=re.MULTILINE)


def test_bench_header_documented():
    from src.bench.runner import CSV_COLUMNS

    assert ",".join(CSV_COLUMNS) in (DOCS / "file_formats.md").read_text(encoding="utf-8")
