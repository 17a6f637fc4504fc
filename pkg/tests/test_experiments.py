"""Registry, configuration, and report-writing behavior of the experiments layer."""

import json
import math

import numpy as np
import pytest

from decaylab.experiments import (
    REGISTRY,
    ConfigError,
    ExperimentConfig,
    NumericalError,
    Series,
    experiment_names,
    grid_values,
    parse_config_file,
    registry_text,
    run_experiment,
    thread_count,
    write_series_csv,
)

EXPECTED_NAMES = (
    "prop-fn-norm",
    "thm-ct-poly",
    "thm-ct-exp-var",
    "prop-poly-normal",
    "rem-optimality",
    "thm-inv-bounded",
    "thm-inv-poly",
    "prop-ft-norm",
    "lemma-suite",
    "prop-frac-normalize",
)


class TestRegistry:
    def test_names_and_order(self):
        assert experiment_names() == EXPECTED_NAMES
        assert len(REGISTRY) == 10

    def test_listing_is_stable_and_complete(self):
        text_a = registry_text()
        text_b = registry_text()
        assert text_a == text_b
        for name in EXPECTED_NAMES:
            assert name in text_a
        # every entry shows a description and its defaults
        assert text_a.count("checks:") == 10
        assert text_a.count("defaults:") == 10
        assert text_a.endswith("\n")

    def test_defaults_text_mentions_key_parameters(self):
        text = registry_text()
        assert "K=1000000" in text      # sqrt-model experiments
        assert "n_grid=16:16384:33" in text
        assert "t_grid=1:10000:30" in text


class TestGrids:
    def test_default_n_grid_has_33_unique_integers(self):
        ns = grid_values((16, 16384, 33), integer=True)
        assert ns.dtype == np.int64
        assert len(ns) == 33
        assert ns[0] == 16 and ns[-1] == 16384
        assert (np.diff(ns) > 0).all()

    def test_float_grid_is_geometric(self):
        ts = grid_values((1.0, 1e4, 30))
        assert len(ts) == 30
        ratios = ts[1:] / ts[:-1]
        assert np.allclose(ratios, ratios[0])

    @pytest.mark.parametrize(
        "spec", [(0.0, 10, 5), (10, 10, 5), (1, 10, 1), (1, 10), "1:10", "a:b:c"]
    )
    def test_bad_grid_specs_rejected(self, spec):
        with pytest.raises(ConfigError):
            grid_values(spec)

    def test_integer_grid_needs_min_at_least_one(self):
        with pytest.raises(ConfigError):
            grid_values((0.5, 100, 5), integer=True)


class TestConfig:
    def test_string_coercion(self):
        cfg = ExperimentConfig.from_mapping(
            {
                "experiment": "thm-ct-poly",
                "beta": "1.5",
                "K": "20000",
                "n_grid": "16:4096:17",
            }
        )
        assert cfg.beta == 1.5
        assert cfg.K == 20000
        assert cfg.n_grid == (16.0, 4096.0, 17)

    def test_comma_grid_syntax(self):
        cfg = ExperimentConfig(experiment="thm-ct-poly", n_grid="16,4096,17")
        assert cfg.n_grid == (16.0, 4096.0, 17)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown parameter"):
            ExperimentConfig.from_mapping(
                {"experiment": "thm-ct-poly", "gamma": "1"}
            )

    def test_bad_mode_rejected(self):
        with pytest.raises(ConfigError, match="mode"):
            ExperimentConfig(experiment="prop-fn-norm", mode="quick")

    def test_bad_numbers_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(experiment="thm-ct-poly", beta="abc")
        with pytest.raises(ConfigError):
            ExperimentConfig(experiment="thm-ct-poly", K="12.5")
        with pytest.raises(ConfigError):
            ExperimentConfig(experiment="thm-ct-poly", seed=-1)

    def test_experiment_required(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_mapping({"beta": "1"})


class TestConfigFile:
    def test_parse_with_comments(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("# header\nK = 20000\n\nbeta=2.0  # inline\n")
        assert parse_config_file(path) == {"K": "20000", "beta": "2.0"}

    def test_parse_rejects_non_assignment(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("K 20000\n")
        with pytest.raises(ConfigError, match="key=value"):
            parse_config_file(path)


class TestThreadCount:
    def test_explicit_value(self):
        assert thread_count(3) == 3
        assert thread_count("2") == 2

    def test_zero_means_auto(self):
        assert thread_count(0) >= 1

    def test_env_fallback(self, monkeypatch):
        monkeypatch.setenv("DECAYLAB_THREADS", "5")
        assert thread_count() == 5
        monkeypatch.setenv("DECAYLAB_THREADS", "junk")
        with pytest.raises(ConfigError):
            thread_count()

    def test_negative_rejected(self):
        with pytest.raises(ConfigError):
            thread_count(-1)


class TestCsvWriter:
    def test_plain_series_format(self, tmp_path):
        s = Series("demo", "n", np.array([16.0, 32.0]), np.array([0.5, 0.25]))
        path = tmp_path / "demo.csv"
        write_series_csv(path, s)
        text = path.read_text()
        lines = text.splitlines()
        assert lines[0] == "index,value"
        assert lines[1] == "16,0.5"
        assert text.endswith("\n")

    def test_attaining_columns_and_roundtrip(self, tmp_path):
        s = Series(
            "demo",
            "n",
            np.array([16.0]),
            np.array([1.0 / 3.0]),
            attain_re=np.array([0.2]),
            attain_im=np.array([5.0]),
        )
        path = tmp_path / "demo.csv"
        write_series_csv(path, s)
        lines = path.read_text().splitlines()
        assert lines[0] == "index,value,attaining_point_re,attaining_point_im"
        fields = lines[1].split(",")
        assert float(fields[1]) == 1.0 / 3.0  # 17 significant digits round-trip

    def test_rewrite_is_byte_identical(self, tmp_path):
        s = Series("demo", "n", np.geomspace(1, 100, 7), np.geomspace(1, 1e-3, 7))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_series_csv(a, s)
        write_series_csv(b, s)
        assert a.read_bytes() == b.read_bytes()


class TestRunExperiment:
    def test_unknown_name(self):
        with pytest.raises(ConfigError, match="available"):
            run_experiment(ExperimentConfig(experiment="nope"))

    def test_rejected_parameter_for_experiment(self):
        cfg = ExperimentConfig(experiment="thm-ct-poly", seed=1)
        with pytest.raises(ConfigError, match="does not take"):
            run_experiment(cfg)

    def test_p_and_q_must_come_together(self):
        cfg = ExperimentConfig(experiment="prop-fn-norm", p=0.3)
        with pytest.raises(ConfigError, match="together"):
            run_experiment(cfg)

    def test_in_memory_run_has_summary_contract(self):
        cfg = ExperimentConfig(
            experiment="thm-ct-poly", K=20000, n_grid=(16, 4096, 17)
        )
        result = run_experiment(cfg, figures=False)
        assert result.passed
        assert result.csv_paths == [] and result.summary_path is None
        for key in ("experiment", "params", "fit", "pass", "tolerance"):
            assert key in result.summary
        fit = result.summary["fit"]
        assert set(fit) == {"exponent", "log_power", "residual"}
        assert abs(fit["exponent"] - 1.0 / 3.0) <= 0.05
        assert isinstance(result.summary["pass"], bool)
        assert json.dumps(result.summary)  # JSON-serializable throughout

    def test_truncated_spectrum_raises_numerical_error(self):
        cfg = ExperimentConfig(experiment="thm-ct-poly", K=8)
        with pytest.raises(NumericalError, match="truncation"):
            run_experiment(cfg)

    def test_lemma_suite_is_seed_deterministic(self):
        cfg = ExperimentConfig(experiment="lemma-suite", seed=0)
        first = run_experiment(cfg, figures=False)
        second = run_experiment(cfg, figures=False)
        assert first.passed and second.passed
        for sa, sb in zip(first.series, second.series):
            assert np.array_equal(sa.values, sb.values)
        other = run_experiment(
            ExperimentConfig(experiment="lemma-suite", seed=7), figures=False
        )
        assert other.passed
        changed = any(
            not np.array_equal(sa.values, sb.values)
            for sa, sb in zip(first.series, other.series)
        )
        assert changed

    def test_report_files_written(self, tmp_path):
        cfg = ExperimentConfig(
            experiment="thm-ct-poly",
            K=20000,
            n_grid=(16, 4096, 17),
            out=str(tmp_path / "report"),
        )
        result = run_experiment(cfg, figures=True)
        names = {p.name for p in result.csv_paths}
        assert names == {"thm-ct-poly.opnorm.csv"}
        assert result.summary_path.name == "thm-ct-poly.summary.json"
        assert [p.name for p in result.figure_paths] == ["thm-ct-poly.opnorm.png"]
        for p in result.csv_paths + [result.summary_path] + result.figure_paths:
            assert p.exists() and p.stat().st_size > 0
        header = result.csv_paths[0].read_text().splitlines()[0]
        assert header == "index,value,attaining_point_re,attaining_point_im"
        loaded = json.loads(result.summary_path.read_text())
        assert loaded["experiment"] == "thm-ct-poly"
        assert loaded["pass"] is True
        assert math.isclose(
            loaded["fit"]["exponent"], result.summary["fit"]["exponent"]
        )
