"""
Shared fixtures: small run configurations and a cached reference run.
"""

import copy
import sys
from pathlib import Path
from typing import Any, Dict

import pytest
import yaml

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli_io.run_config import RunConfig, config_from_dict

BASE_CONFIG: Dict[str, Any] = {
    "grid": {"dim": 1, "extents": [1.0], "cells": [32]},
    "motility": {"kind": "power", "a": 1.0, "alpha": 1.0},
    "epsilon": 0.01,
    "initial": {
        "u0": {"kind": "bump", "center": 0.3, "width": 0.1, "mass": 1.0},
        "v0": {"kind": "constant", "value": 1.0},
    },
    "stepping": {"scheme": "imex", "dt": 1e-3},
    "horizon": 1.0,
    "output": {"cadence": 0.1},
}


def _merge(base: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(base)
    for key, value in updates.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict) and key not in ("u0", "v0"):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def config_data(**updates) -> Dict[str, Any]:
    """BASE_CONFIG with nested updates (u0 / v0 are replaced whole)."""
    data = copy.deepcopy(BASE_CONFIG)
    initial = updates.pop("initial", None)
    data = _merge(data, updates)
    if initial:
        for key, value in initial.items():
            data["initial"][key] = copy.deepcopy(value)
    return data


def make_config(**updates) -> RunConfig:
    return config_from_dict(config_data(**updates))


@pytest.fixture(scope="session")
def config_factory():
    """Build validated RunConfigs from BASE_CONFIG plus overrides."""
    return make_config


@pytest.fixture
def config_file(tmp_path):
    """Write a configuration mapping to a YAML file and return its path."""
    def write(data: Dict[str, Any], name: str = "run.yaml") -> Path:
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        return path

    return write


@pytest.fixture(scope="session")
def reference_run():
    """Bump data on 32 cells to T=1, cadence 0.05, snapshots kept."""
    from src.stepper import run

    return run(make_config(output={"cadence": 0.05}))
