import math
from fractions import Fraction

import numpy as np
import pytest

from src.config_manager import ConfigManager
from src.errors import DimensionError, InvalidParameterError, NotApplicableError
from src.exact_linalg import BigMatrix, zeros
from src.graph_core import build_dynkin_d, random_corpus
from src.utils.logger import setup_logger
from src.verify import (
    VerifyEngine,
    VerifySettings,
    check_rank2_graphs,
    check_residue_systems,
    closed_form_eigdata,
    etxi_case_exponent,
    vanishing_indices_exact,
    verify_dynkin,
    verify_dynkin_range,
    verify_eig_residuals,
    verify_etxi,
    verify_fordet,
    verify_rank2_corpus,
    verify_relwa,
)


class TestEigData:
    def test_closed_form_d5(self):
        eig = closed_form_eigdata(5)
        expected = [2 * math.cos((2 * k - 1) * math.pi / 8) for k in range(1, 5)]
        assert np.allclose(eig.lambdas, expected)
        assert np.allclose(eig.xi(1)[:2], [1.0, math.cos(math.pi / 8)])
        assert eig.xis.shape == (4, 4)

    def test_right_angle_eigenvalue(self):
        assert closed_form_eigdata(4).lambdas[1] == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("n, expected", [(5, 4 * math.sqrt(2)), (4, 1.5 * math.sqrt(3))])
    def test_determinant_values(self, n, expected):
        assert verify_fordet(n).detail["abs_det"] == pytest.approx(expected, rel=1e-10)

    def test_small_n_rejected(self):
        with pytest.raises(InvalidParameterError):
            closed_form_eigdata(3)

    @pytest.mark.parametrize("n", range(4, 65))
    def test_residuals(self, n):
        result = verify_eig_residuals(n)
        assert result.passed
        assert result.residual < 1e-9

    @pytest.mark.parametrize("n", range(4, 65))
    def test_eigenvector_determinant(self, n):
        result = verify_fordet(n)
        assert result.passed, result.detail
        assert result.residual < 1e-8


class TestEtxi:
    @pytest.mark.parametrize("n", range(4, 65))
    def test_product_or_vanishing(self, n):
        result = verify_etxi(n)
        assert result.passed, result.detail
        if n % 4 == 0:
            assert result.detail["vanishing"] == [n // 2]
        else:
            assert result.detail["vanishing"] == []
            assert result.detail["log2_product"] == pytest.approx(1 - math.ceil(n / 2), abs=1e-8)

    @pytest.mark.parametrize("n", range(4, 200))
    def test_vanishing_indices_exact(self, n):
        assert vanishing_indices_exact(n) == ([n // 2] if n % 4 == 0 else [])

    def test_residue_systems(self):
        for n in range(5, 200):
            expected = None if n % 4 == 0 else True
            assert check_residue_systems(n) is expected

    def test_case_exponent(self):
        assert etxi_case_exponent(6) == -2
        assert etxi_case_exponent(5) == -2
        assert etxi_case_exponent(7) == Fraction(-3)
        assert etxi_case_exponent(8) is None
        for n in range(4, 65):
            if n % 4:
                assert etxi_case_exponent(n) == 1 - math.ceil(n / 2)


class TestRelwa:
    def test_divisor_of_d5(self, b_d5):
        result = verify_relwa(b_d5)
        assert result.passed, result.detail
        assert result.detail["det_exact"] in ("2", "-2")
        assert result.detail["rank_exact"] == 4

    def test_divisor_of_d8(self):
        from src.graph_core import divisor_of_partition, dynkin_partition
        b = divisor_of_partition(build_dynkin_d(8), dynkin_partition(8)).B
        result = verify_relwa(b)
        assert result.passed, result.detail
        assert result.detail["det_exact"] == "0"
        assert result.detail["rank_exact"] == 6 == result.detail["numeric_rank"]

    def test_singular_walk_matrix(self):
        result = verify_relwa(BigMatrix.from_rows([[0, 1], [1, 0]]))
        assert result.passed
        assert result.detail["det_exact"] == "0"
        assert result.detail["numeric_rank"] == 1

    def test_path(self):
        a = BigMatrix.from_rows([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
        assert verify_relwa(a).passed

    def test_non_real_spectrum(self):
        with pytest.raises(NotApplicableError):
            verify_relwa(BigMatrix.from_rows([[0, -1], [1, 0]]))

    def test_repeated_eigenvalue(self):
        with pytest.raises(NotApplicableError):
            verify_relwa(zeros(2, 2))

    def test_non_square(self):
        with pytest.raises(DimensionError):
            verify_relwa(zeros(2, 3))


class TestReports:
    def test_d5(self):
        report = verify_dynkin(5)
        assert report.passed, report.failed_flags()
        assert report.snf_diag == ["1", "1", "1", "2", "0"]
        assert report.predicted_snf == report.snf_diag
        assert abs(int(report.det_hat)) == 2 and report.predicted_det_magnitude == "2"
        assert report.det_hat_sign == int(report.det_hat) // 2
        assert report.rank_W == 4 and report.rank2 == 3
        assert report.vanishing_indices == []
        assert report.residue_systems is True

    def test_d8(self):
        report = verify_dynkin(8)
        assert report.passed, report.failed_flags()
        assert report.det_hat == "0"
        assert report.rank_W == 6 and report.rank_hat == 6
        assert report.predicted_snf is None
        assert report.vanishing_indices == [4]
        assert "snf_pattern" not in report.flags

    @pytest.mark.parametrize("n", range(4, 17))
    def test_all_flags_pass(self, n):
        report = verify_dynkin(n)
        assert report.passed, report.failed_flags()
        assert "relwa" in report.flags and "main_eigen_numeric" in report.flags

    def test_flags_skipped_above_caps(self):
        settings = VerifySettings(relwa_n_max=5, numeric_n_max=5)
        report = verify_dynkin(6, settings)
        assert "relwa" not in report.flags
        assert "main_eigen_numeric" not in report.flags

    def test_to_dict_drops_timing(self):
        report = verify_dynkin(6)
        assert "timing" not in report.to_dict()
        assert report.to_dict(include_timing=True)["timing"]["seconds"] >= 0

    def test_range_is_ordered(self):
        seen = []
        reports = verify_dynkin_range(4, 9, on_report=lambda r: seen.append(r.n))
        assert [r.n for r in reports] == list(range(4, 10))
        assert sorted(seen) == list(range(4, 10))

    def test_range_validation(self):
        with pytest.raises(InvalidParameterError):
            verify_dynkin_range(3, 8)
        with pytest.raises(InvalidParameterError):
            verify_dynkin_range(9, 8)

    @pytest.mark.slow
    def test_full_range_with_pool(self):
        reports = verify_dynkin_range(4, 64, workers=2)
        failures = {r.n: r.failed_flags() for r in reports if not r.passed}
        assert not failures
        for r in reports:
            if r.n % 4:
                assert abs(int(r.det_hat)) == 2 ** (r.n // 2 - 1)
                assert r.snf_diag == r.predicted_snf
            else:
                assert r.rank_hat == r.n - 2


class TestRank2:
    def test_dynkin_meets_bound_exactly(self):
        assert check_rank2_graphs(build_dynkin_d(n) for n in range(4, 65)) == []

    def test_corpus(self):
        assert verify_rank2_corpus(200, 16, seed=42, dynkin_max=20) == []

    @pytest.mark.slow
    def test_full_corpus(self):
        assert verify_rank2_corpus(1000, 16, seed=42, dynkin_max=64) == []

    def test_corpus_is_reproducible(self):
        assert list(random_corpus(20, 16, seed=42)) == list(random_corpus(20, 16, seed=42))


class TestEngine:
    @pytest.fixture
    def engine(self, config_dir):
        config = ConfigManager(config_dir)
        logger = setup_logger(log_dir=config.log_dir)
        return VerifyEngine(config, logger)

    def test_worker_count(self, engine):
        assert engine.worker_count(3) == 3
        assert engine.worker_count() >= 1

    def test_settings_from_config(self, config_dir):
        config = ConfigManager(config_dir)
        config.set("verify", "relwa_n_max", 12)
        config.set("numeric", "eigen_tol", "1e-7")
        settings = VerifySettings.from_config(config)
        assert settings.relwa_n_max == 12
        assert settings.eigen_tol == 1e-7
        assert settings.jacobi_max_sweeps == 100

    def test_run_range(self, engine):
        reports = engine.run_range(4, 7, workers=1, show_progress=False)
        assert [r.n for r in reports] == [4, 5, 6, 7]
        assert all(r.passed for r in reports)

    def test_run_corpus(self, engine):
        assert engine.run_corpus(50, 10, seed=1, dynkin_max=12) == []
