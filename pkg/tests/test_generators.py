from __future__ import annotations

import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.core.problem import constraint_violation, linear_slack, quad_values
from src.exceptions import BadDimensions, ParseError, ShapeMismatch
from src.generators.portfolio import MIN_HOLDINGS, gen_sps_synthetic
from src.generators.recovery import gen_recovery_qcqp, gen_recovery_simplex
from src.generators.registry import generate
from src.generators.scca import (
    TAU_GRID,
    covariance_blocks,
    gen_scca_synthetic,
    normalize_samples,
    scca_from_csv,
    signal_patterns,
)


class TestRecoverySimplex:
    def test_noiseless_objective_vanishes_at_truth(self):
        bundle = gen_recovery_simplex(30, 20, 4, math.inf, seed=1)
        assert bundle.problem.objective.value(bundle.x_star) == pytest.approx(0.0, abs=1e-12)

    def test_truth_on_simplex(self):
        bundle = gen_recovery_simplex(30, 20, 4, 20.0, seed=2)
        x = bundle.x_star
        assert x.sum() == pytest.approx(1.0)
        assert np.all(x >= 0.0)
        assert np.count_nonzero(x) == 4
        assert bundle.problem.m_eq == 1 and bundle.problem.k == 0

    def test_noise_level(self):
        noisy = gen_recovery_simplex(30, 20, 4, 10.0, seed=3)
        # 1/2 ||D x* - d||^2 = 1/2 ||noise||^2 and ||D x*||^2 / ||noise||^2 = 10^(snr/10)
        clean = gen_recovery_simplex(30, 20, 4, math.inf, seed=3)
        signal = 2.0 * (clean.problem.objective.c)
        noise = 2.0 * noisy.problem.objective.value(noisy.x_star)
        assert 10.0 * math.log10(signal / noise) == pytest.approx(10.0)

    def test_recommended_tau(self):
        assert gen_recovery_simplex(30, 20, 4, math.inf, seed=0).recommended_tau == 1.0
        assert gen_recovery_simplex(1001, 5, 2, math.inf, seed=0).recommended_tau == 0.1

    def test_deterministic(self):
        assert gen_recovery_simplex(30, 20, 4, 15.0, 9).to_json() == gen_recovery_simplex(30, 20, 4, 15.0, 9).to_json()

    def test_bad_sparsity(self):
        with pytest.raises(BadDimensions):
            gen_recovery_simplex(5, 5, 6, math.inf, seed=0)


class TestRecoveryQCQP:
    @pytest.mark.parametrize("box_kind", ["free", "box22", "nonneg"])
    def test_constraint_pattern(self, box_kind):
        bundle = gen_recovery_qcqp(20, 25, 4, 3, 3, box_kind, seed=5)
        p, x = bundle.problem, bundle.x_star
        slack_quad = bundle.meta["slack_quadratic"]
        slack_lin = bundle.meta["slack_linear"]
        f = quad_values(p, x)
        r = -linear_slack(p, x)
        for i in range(p.k):
            if i in slack_quad:
                assert -1.0 <= f[i] < 0.0
            else:
                assert f[i] == pytest.approx(0.0, abs=1e-9)
        for j in range(p.m):
            if j in slack_lin:
                assert -1.0 <= r[j] < 0.0
            else:
                assert r[j] == pytest.approx(0.0, abs=1e-9)
        assert constraint_violation(p, x)["max"] <= 1e-9
        assert bundle.recommended_tau == 3.0

    def test_box22(self):
        bundle = gen_recovery_qcqp(12, 17, 2, 2, 3, "box22", seed=6)
        assert np.all(bundle.problem.box.lower == -2.0)
        assert np.all(bundle.problem.box.upper == 2.0)
        assert np.max(np.abs(bundle.x_star)) <= 1.99

    def test_nonneg(self):
        bundle = gen_recovery_qcqp(12, 17, 2, 2, 3, "nonneg", seed=6)
        assert np.all(bundle.x_star >= 0.0)
        assert np.all(bundle.problem.box.lower == 0.0)

    def test_noiseless(self):
        bundle = gen_recovery_qcqp(12, 17, 2, 2, 3, "free", seed=7)
        assert bundle.problem.objective.value(bundle.x_star) == pytest.approx(0.0, abs=1e-10)

    def test_design_matrix_normalized_by_rows(self):
        Q = gen_recovery_qcqp(60, 400, 0, 0, 3, "free", seed=3).problem.objective.Q
        assert abs(float(np.mean(np.diag(Q))) - 1.0) <= 0.1
        assert np.linalg.eigvalsh(Q)[-1] <= 3.0

    def test_deterministic(self):
        first = gen_recovery_qcqp(12, 17, 2, 2, 3, "free", seed=8).to_json()
        assert first == gen_recovery_qcqp(12, 17, 2, 2, 3, "free", seed=8).to_json()
        assert first != gen_recovery_qcqp(12, 17, 2, 2, 3, "free", seed=9).to_json()

    def test_unknown_box(self):
        with pytest.raises(BadDimensions):
            gen_recovery_qcqp(12, 17, 2, 2, 3, "ball", seed=0)

    def test_meta_in_document(self):
        data = json.loads(gen_recovery_qcqp(12, 17, 1, 1, 3, "free", seed=0).to_json())
        assert data["meta"]["family"] == "recovery-qcqp"
        assert data["meta"]["recommended_tau"] == 3.0
        assert len(data["x_star"]) == 12


class TestSCCA:
    def test_structure(self):
        bundle = gen_scca_synthetic(16, 24, 30, 6, seed=1)
        p = bundle.problem
        assert p.n == 40 and p.k == 1
        assert bundle.x_star is None
        assert bundle.meta["n_x"] == 16
        assert bundle.meta["tau_grid"] == list(TAU_GRID)
        assert p.quad_constraints[0].c == -2.0
        S_xy, S_xx, S_yy = covariance_blocks(p, 16)
        assert S_xy.shape == (16, 24)
        assert_allclose(p.objective.Q[:16, :16], 0.0)

    def test_signal_patterns(self):
        px, py = signal_patterns(16, 24)
        assert px.tolist()[:4] == [1.0, 1.0, -1.0, -1.0]
        assert np.count_nonzero(px[4:]) == 0
        assert py.tolist()[-6:] == [1.0, 1.0, 1.0, -1.0, -1.0, -1.0]
        assert np.count_nonzero(py[:-6]) == 0

    def test_requires_multiple_of_eight(self):
        with pytest.raises(BadDimensions):
            gen_scca_synthetic(12, 16, 10, 4, seed=0)

    def test_deterministic(self):
        assert gen_scca_synthetic(8, 8, 5, 2, 4).to_json() == gen_scca_synthetic(8, 8, 5, 2, 4).to_json()

    def test_not_an_scca_instance(self, two_point):
        with pytest.raises(ShapeMismatch):
            covariance_blocks(two_point, 1)


class TestSCCAFromCSV:
    def _write(self, path, rows):
        path.write_text("\n".join(",".join(str(v) for v in row) for row in rows) + "\n")
        return path

    def test_zero_data(self, tmp_path):
        zeros = [[0] * 5 for _ in range(3)]
        bundle = scca_from_csv(self._write(tmp_path / "x.csv", zeros), self._write(tmp_path / "y.csv", zeros), 2)
        assert_allclose(bundle.problem.objective.Q, 0.0)
        assert bundle.meta["n_x"] == 3 and bundle.meta["N"] == 5

    def test_header_detected(self, tmp_path):
        rows = [["s1", "s2", "s3"], [1.0, 2.0, 4.0], [0.5, -1.0, 3.0]]
        bundle = scca_from_csv(self._write(tmp_path / "x.csv", rows), self._write(tmp_path / "y.csv", rows), 2)
        assert bundle.problem.n == 4

    def test_identical_files_give_symmetric_cross_covariance(self, tmp_path):
        rng = np.random.default_rng(0)
        rows = rng.standard_normal((4, 9)).round(6).tolist()
        path = self._write(tmp_path / "x.csv", rows)
        bundle = scca_from_csv(path, path, 2)
        S_xy, _, _ = covariance_blocks(bundle.problem, 4)
        assert_allclose(S_xy, S_xy.T, atol=1e-10)
        assert np.min(np.linalg.eigvalsh(S_xy)) >= -1e-9

    def test_sample_count_mismatch(self, tmp_path):
        x = self._write(tmp_path / "x.csv", [[1, 2, 3], [4, 5, 7]])
        y = self._write(tmp_path / "y.csv", [[1, 2], [3, 5]])
        with pytest.raises(ShapeMismatch):
            scca_from_csv(x, y, 1)

    def test_non_numeric_cell(self, tmp_path):
        x = self._write(tmp_path / "x.csv", [[1, 2, 3], [4, "oops", 6]])
        with pytest.raises(ParseError):
            scca_from_csv(x, x, 1)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            scca_from_csv(tmp_path / "absent.csv", tmp_path / "absent.csv", 1)


class TestNormalizeSamples:
    def test_columns_standardized(self):
        rng = np.random.default_rng(1)
        out = normalize_samples(rng.standard_normal((6, 10)) * 3.0 + 2.0)
        assert np.all(np.abs(out.mean(axis=0)) <= 1e-12)
        assert np.all(np.abs(out.var(axis=0) - 1.0) <= 1e-9)

    def test_constant_column_zeroed(self):
        M = np.array([[1.0, 5.0], [2.0, 5.0], [4.0, 5.0]])
        out = normalize_samples(M)
        assert_allclose(out[:, 1], 0.0)
        assert out.var(axis=0)[0] == pytest.approx(1.0)


class TestSPS:
    def test_structure(self):
        bundle = gen_sps_synthetic(16, 5, seed=2)
        p = bundle.problem
        assert (p.k, p.m, p.m_eq) == (1, 1, 1)
        assert_allclose(p.box.lower, 0.0)
        assert_allclose(p.box.upper, 0.3)
        assert p.quad_constraints[0].c == pytest.approx(-0.001)
        assert p.b[0] == pytest.approx(-0.002)
        assert_allclose(p.A_eq, np.ones((1, 16)))
        assert bundle.recommended_tau == 1.0
        assert bundle.x_star is None

    def test_objective_is_twice_the_risk(self):
        bundle = gen_sps_synthetic(8, 4, seed=3)
        p = bundle.problem
        Q1 = 0.5 * p.quad_constraints[0].Q
        x = np.full(8, 1.0 / 8.0)
        risk = p.objective.value(x)
        assert risk == pytest.approx(0.5 * x @ p.objective.Q @ x)
        assert risk >= float(x @ Q1 @ x)

    def test_rejects_small_support(self):
        with pytest.raises(BadDimensions):
            gen_sps_synthetic(16, MIN_HOLDINGS - 1, seed=0)

    def test_rejects_bad_n(self):
        with pytest.raises(BadDimensions):
            gen_sps_synthetic(18, 5, seed=0)

    def test_deterministic(self):
        assert gen_sps_synthetic(16, 5, 1).to_json() == gen_sps_synthetic(16, 5, 1).to_json()


class TestRegistry:
    def test_dispatch(self):
        assert generate("sps-synth", n=8, s=4, seed=0).family == "sps-synth"
        assert generate("recovery-qcqp", n=10, s=2, seed=0, k=1, m=1).problem.A.shape == (1, 10)
        assert generate("scca-synth", n=8, s=2, seed=0, samples=5).problem.n == 16

    def test_unknown_family(self):
        with pytest.raises(BadDimensions):
            generate("recovery-lasso", n=8, s=2, seed=0)
