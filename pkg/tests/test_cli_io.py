"""
Run configuration parsing, run directory persistence and the ksm command line.
"""

import json
import sys
from pathlib import Path

import pandas as pd
import pytest
import yaml

sys.path.insert(0, str(Path(__file__).parent.parent))

from tests.conftest import config_data
from src.cli_io import ConfigError, SeriesFormatError, parse_config, read_series, write_series
from src.cli_io.cli import EXIT_AUDIT, EXIT_OK, EXIT_VALIDATION, main

MINIMAL = """
grid: {dim: 1, extents: [1.0], cells: [16]}
motility: {kind: power, a: 1.0, alpha: 1.0}
epsilon: 0.01
initial:
  u0: {kind: constant, value: 1.0}
  v0: {kind: constant, value: 1.0}
horizon: 0.5
"""


class TestRunConfig:
    """parse_config / load_config"""

    def test_minimal_config(self):
        config = parse_config(MINIMAL)
        assert config.grid.cells == [16]
        assert config.stepping.scheme == "imex"
        assert config.output.cadence == pytest.approx(0.1)
        assert config.experiments.epsilons == [0.1, 0.01, 0.001]

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(MINIMAL + "epsilonn: 0.1\n")
        assert any(line.startswith("epsilonn:") for line in exc.value.errors)

    def test_degenerate_motility(self):
        with pytest.raises(ConfigError, match="degenerate motility"):
            parse_config(MINIMAL.replace("a: 1.0", "a: 0.0"))

    def test_wrong_type_reports_path(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(MINIMAL.replace("cells: [16]", "cells: [sixteen]"))
        assert any(line.startswith("grid.cells.0:") for line in exc.value.errors)

    def test_epsilon_range(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(MINIMAL.replace("epsilon: 0.01", "epsilon: 1.0"))
        assert any(line.startswith("epsilon:") for line in exc.value.errors)

    def test_malformed_yaml(self):
        with pytest.raises(ConfigError, match="malformed YAML"):
            parse_config("grid: [1, 2\n")

    def test_not_a_mapping(self):
        with pytest.raises(ConfigError, match="expected a mapping"):
            parse_config("- 1\n- 2\n")

    def test_content_hash(self):
        a = parse_config(MINIMAL)
        b = parse_config(MINIMAL)
        c = parse_config(MINIMAL.replace("epsilon: 0.01", "epsilon: 0.02"))
        assert a.content_hash() == b.content_hash()
        assert len(a.content_hash()) == 40
        assert a.content_hash() != c.content_hash()


class TestSeries:
    """write_series / read_series"""

    def test_round_trip(self, reference_run, tmp_path):
        write_series(reference_run, tmp_path / "run")
        loaded = read_series(tmp_path / "run")
        assert loaded.records == reference_run.records
        assert loaded.meta == reference_run.meta
        assert loaded.complete
        assert len(loaded.states) == len(reference_run.states)
        assert (loaded.states[-1].u.values == reference_run.states[-1].u.values).all()
        assert loaded.config.content_hash() == reference_run.config.content_hash()

    def test_manifest(self, reference_run, tmp_path):
        manifest = json.loads(write_series(reference_run, tmp_path).read_text())
        assert manifest["format"] == "ksm-run v1"
        assert manifest["records"] == len(reference_run)
        assert manifest["config_hash"] == reference_run.config.content_hash()
        assert (tmp_path / "fields" / "u" / "00000.field").is_file()

    def test_non_monotone_time(self, reference_run, tmp_path):
        write_series(reference_run, tmp_path)
        frame = pd.read_csv(tmp_path / "diag.csv")
        frame.loc[2, "t"] = frame.loc[1, "t"]
        frame.to_csv(tmp_path / "diag.csv", index=False)
        with pytest.raises(SeriesFormatError, match="strictly increasing"):
            read_series(tmp_path)

    def test_truncated_csv(self, reference_run, tmp_path):
        write_series(reference_run, tmp_path)
        lines = (tmp_path / "diag.csv").read_text().splitlines()
        (tmp_path / "diag.csv").write_text("\n".join(lines[:-3]) + "\n")
        with pytest.raises(SeriesFormatError, match="truncated"):
            read_series(tmp_path)

    def test_missing_snapshots(self, reference_run, tmp_path):
        write_series(reference_run, tmp_path)
        for path in (tmp_path / "fields" / "v").iterdir():
            path.unlink()
        with pytest.raises(SeriesFormatError, match="missing"):
            read_series(tmp_path)

    def test_version_mismatch(self, reference_run, tmp_path):
        path = write_series(reference_run, tmp_path)
        manifest = json.loads(path.read_text())
        manifest["format"] = "ksm-run v0"
        path.write_text(json.dumps(manifest))
        with pytest.raises(SeriesFormatError, match="unsupported series format"):
            read_series(tmp_path)

    def test_no_manifest(self, tmp_path):
        with pytest.raises(SeriesFormatError, match="no manifest.json"):
            read_series(tmp_path)


class TestCli:
    """main(argv) exit codes and outputs"""

    def _small(self, **updates):
        return config_data(grid={"cells": [16]}, **updates)

    def test_run_and_check(self, config_file, tmp_path):
        path = config_file(self._small())
        out = tmp_path / "out"
        assert main(["run", "--config", str(path), "--out", str(out)]) == EXIT_OK
        assert len(pd.read_csv(out / "diag.csv")) == 11
        assert (out / "reports" / "bounds.yaml").is_file()
        assert (out / "summary.md").is_file()
        assert main(["check", "--run-dir", str(out)]) == EXIT_OK

    def test_tampered_mass_fails_audit(self, config_file, tmp_path):
        out = tmp_path / "out"
        assert main(["run", "--config", str(config_file(self._small())), "--out", str(out)]) == EXIT_OK
        frame = pd.read_csv(out / "diag.csv", float_precision="round_trip")
        frame.loc[5, "mass"] *= 1.01
        frame.to_csv(out / "diag.csv", index=False, float_format="%.17g")
        assert main(["check", "--out", str(out)]) == EXIT_AUDIT

    def test_sweep_needs_three_epsilons(self, config_file, tmp_path):
        data = self._small(experiments={"epsilons": [0.1, 0.01]})
        assert main(["sweep", "--config", str(config_file(data)), "--out", str(tmp_path / "sweep")]) == EXIT_VALIDATION

    def test_invalid_config(self, config_file, tmp_path):
        data = self._small()
        data["epsilonn"] = 0.1
        assert main(["run", "--config", str(config_file(data)), "--out", str(tmp_path)]) == EXIT_VALIDATION

    def test_missing_config_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.yaml")]) == EXIT_VALIDATION

    def test_missing_run_dir(self, tmp_path):
        assert main(["check", "--run-dir", str(tmp_path / "absent")]) == EXIT_VALIDATION
        assert main(["check"]) == EXIT_VALIDATION

    def test_missing_arguments(self):
        assert main(["run"]) == EXIT_VALIDATION
        assert main([]) == EXIT_VALIDATION

    def test_identical_runs_identical_bytes(self, config_file, tmp_path):
        path = config_file(self._small())
        for name in ("a", "b"):
            assert main(["run", "--config", str(path), "--out", str(tmp_path / name)]) == EXIT_OK
        files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
        assert files
        for rel in files:
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()

    def test_config_echo(self, config_file, tmp_path):
        out = tmp_path / "out"
        main(["run", "--config", str(config_file(self._small())), "--out", str(out)])
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["grid"]["cells"] == [16]
        assert yaml.safe_load((out / "reports" / "bounds.yaml").read_text())["passed"] is True
