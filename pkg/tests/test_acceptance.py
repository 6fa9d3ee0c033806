"""
Long-horizon acceptance runs on the generic 1D setup.

Deselect with: pytest -m "not slow"
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.diagnostics import cumulative_bounds, decay_metrics, inequality_scan
from src.experiments import epsilon_sweep, inequality_dt_sensitivity, refinement_study, relaxation_experiment
from src.stepper import run

pytestmark = pytest.mark.slow

GENERIC = {
    "grid": {"cells": [128]},
    "initial": {
        "u0": {"kind": "bump", "center": 0.3, "width": 0.08, "mass": 1.0},
        "v0": {"kind": "constant", "value": 1.0},
    },
    "stepping": {"dt": 1e-3, "cfl_cap": None},
    "output": {"cadence": 0.05},
}


@pytest.fixture(scope="module")
def generic_config(config_factory):
    return config_factory(horizon=10.0, **GENERIC)


@pytest.fixture(scope="module")
def generic_run(generic_config):
    return run(generic_config)


class TestStructure:
    def test_positivity_mass_and_maximum_principle(self, generic_run):
        assert generic_run.complete, generic_run.error
        mass = generic_run.column("mass")
        assert np.max(np.abs(mass - mass[0])) <= 1e-10 * mass[0]
        vinf = generic_run.column("vinf")
        assert np.all(np.diff(vinf) <= 1e-12)
        for s in generic_run.states:
            assert s.u.values.min() >= 0.0
            assert s.v.values.min() >= 0.0

    def test_cumulative_bounds(self, generic_run):
        report = cumulative_bounds(generic_run)
        assert report.absorb_bound == pytest.approx(2.0)
        assert report.grad2_bound == pytest.approx(2.0)
        assert report.absorb_integral <= 2.0 * (1.0 + 1e-8)
        assert report.grad2_integral <= 2.0 * (1.0 + 1e-8)
        assert report.passed


class TestInequalities:
    def test_constants_finite(self, generic_run):
        report = inequality_scan(generic_run)
        assert np.isfinite(report.value("hminus"))
        assert np.isfinite(report.value("energy"))
        assert not report.low_confidence

    def test_dt_halving(self, generic_config):
        report = inequality_dt_sensitivity(generic_config)
        for name in ("hminus", "energy"):
            assert report.relative_change[name] < 0.1, report.constants[name]


class TestDecay:
    def test_long_time_decay(self, config_factory):
        traj = run(config_factory(horizon=50.0, **GENERIC))
        assert traj.complete
        t = traj.times()
        hm1 = traj.column("hm1")
        vinf = traj.column("vinf")
        at_one = float(np.interp(1.0, t, hm1))
        assert hm1[-1] / at_one < 0.05
        assert vinf[-1] < 0.05 * vinf[0]
        assert decay_metrics(traj, t_ref=1.0).hm1_ratio < 0.05


class TestRelaxation:
    def test_point_mass_relaxes_uniformly(self, config_factory):
        base = config_factory(
            initial={"u0": {"kind": "dirac", "center": 0.5, "mass": 1.0}, "v0": {"kind": "constant", "value": 1.0}},
            stepping={"dt": 5e-4},
            output={"cadence": 0.05},
            horizon=1.1,
        )
        report = relaxation_experiment(base, grids=[64, 128, 256], tau=0.1)
        assert report.complete
        assert report.uL2_initial == [64.0, 128.0, 256.0]
        assert report.tau_spread < 2.0


class TestWeakConvergence:
    def test_joint_refinement(self, config_factory):
        base = config_factory(
            grid={"cells": [32]},
            stepping={"dt": 2e-3},
            output={"cadence": 0.01},
            experiments={"scale_dt": True},
        )
        report = refinement_study(base, levels=[32, 64, 128])
        assert report.complete
        for residuals in (report.weak_u, report.weak_v):
            assert residuals[0] > residuals[1] > residuals[2]
        for order in report.weak_u_orders + report.weak_v_orders:
            assert order >= 1.0


class TestEpsilonSweep:
    def test_cauchy_property(self, generic_config):
        report = epsilon_sweep(generic_config, [0.1, 0.01, 0.001])
        assert report.complete
        assert report.contracting
        assert report.distances[1] < report.distances[0]
        assert all(report.increments_decreasing.values())
        assert report.frozen_monotone
