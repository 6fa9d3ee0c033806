"""
Epsilon sweeps, relaxation from point masses and refinement studies.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.experiments import (
    epsilon_sweep,
    inequality_dt_sensitivity,
    masses_agree,
    refinement_study,
    relaxation_experiment,
    restrict,
    run_members,
    validate_epsilons,
    validate_grids,
    validate_levels,
    window_integral,
)

HOMOGENEOUS = {"u0": {"kind": "constant", "value": 1.0}, "v0": {"kind": "constant", "value": 1.0}}
DIRAC = {"u0": {"kind": "dirac", "center": 0.5, "mass": 1.0}, "v0": {"kind": "constant", "value": 1.0}}


class TestValidation:
    def test_single_epsilon(self):
        with pytest.raises(ValueError, match="≥ 3 entries required"):
            validate_epsilons([0.1])

    def test_two_epsilons(self):
        with pytest.raises(ValueError, match="≥ 3 entries required"):
            validate_epsilons([0.1, 0.01])

    def test_epsilons_must_decrease(self):
        with pytest.raises(ValueError, match="strictly decreasing"):
            validate_epsilons([0.1, 0.1, 0.01])

    def test_epsilon_range(self):
        with pytest.raises(ValueError, match="must lie in"):
            validate_epsilons([1.5, 0.1, 0.01])

    def test_levels_repeated(self):
        with pytest.raises(ValueError, match="levels must strictly refine"):
            validate_levels([32, 32, 64])

    def test_levels_not_nested(self):
        with pytest.raises(ValueError, match="levels must strictly refine"):
            validate_levels([16, 24, 48])

    def test_too_few_levels(self):
        with pytest.raises(ValueError, match=">= 3 levels"):
            validate_levels([16, 32])

    def test_grids(self):
        assert validate_grids([16, 32], 1) == [[16], [32]]
        with pytest.raises(ValueError, match="grids must strictly refine"):
            validate_grids([32, 16], 1)


class TestHelpers:
    def test_restrict_1d(self):
        np.testing.assert_allclose(restrict(np.arange(8.0), 2), [0.5, 2.5, 4.5, 6.5])

    def test_restrict_2d(self):
        fine = np.arange(16.0).reshape(4, 4)
        np.testing.assert_allclose(restrict(fine, 2), [[2.5, 4.5], [10.5, 12.5]])

    def test_window_integral(self):
        t = np.linspace(0.0, 2.0, 21)
        assert window_integral(t, np.full(21, 3.0), 0.25, 1.25) == pytest.approx(3.0)
        assert window_integral(t, t, 0.0, 2.0) == pytest.approx(2.0)

    def test_members_keep_order(self, config_factory, tmp_path):
        configs = [config_factory(grid={"cells": [8]}, horizon=0.2, epsilon=e) for e in (0.1, 0.01)]
        trajectories = run_members(configs, ["a", "b"], out_dir=tmp_path, max_workers=1)
        assert [t.meta.eps for t in trajectories] == [0.1, 0.01]
        assert (tmp_path / "a" / "manifest.json").is_file()
        assert (tmp_path / "b" / "diag.csv").is_file()
        assert masses_agree(trajectories)


class TestEpsilonSweep:
    """epsilon_sweep(base, epsilons)"""

    def test_homogeneous_data(self, config_factory):
        base = config_factory(grid={"cells": [8]}, initial=HOMOGENEOUS, horizon=0.5)
        report = epsilon_sweep(base, [0.1, 0.01, 0.001])
        assert report.complete
        assert report.mass_consistent
        assert len(report.distances) == 2
        assert report.contracting
        assert report.frozen_monotone
        assert report.terminal[0]["mass"] == pytest.approx(report.terminal[-1]["mass"], rel=1e-12)
        for name in ("uniform", "cosine"):
            assert len(report.functionals[name]) == 3
            assert report.increments_decreasing[name]

    def test_rejects_short_list(self, config_factory):
        with pytest.raises(ValueError, match="≥ 3 entries required"):
            epsilon_sweep(config_factory(), [0.1, 0.01])

    def test_writes_members(self, config_factory, tmp_path):
        base = config_factory(grid={"cells": [8]}, horizon=0.2)
        epsilon_sweep(base, [0.1, 0.05, 0.01], out_dir=tmp_path)
        assert sorted(p.name for p in tmp_path.iterdir()) == ["eps_0", "eps_1", "eps_2"]


class TestRelaxation:
    def test_requires_dirac(self, config_factory):
        with pytest.raises(ValueError, match="requires dirac initial data"):
            relaxation_experiment(config_factory())

    def test_small_experiment(self, config_factory):
        base = config_factory(initial=DIRAC, horizon=1.0, output={"cadence": 0.05})
        report = relaxation_experiment(base, grids=[16, 32], tau=0.1, taus=[0.05, 0.1])
        assert report.complete
        assert report.uL2_initial == [16.0, 32.0]
        assert report.divergence_slope == pytest.approx(1.0)
        assert all(np.isfinite(report.uL2_tau))
        assert report.uL2_tau[-1] < report.uL2_initial[-1]
        assert report.mass_consistent


class TestRefinement:
    def test_heat_equation_order(self, config_factory):
        base = config_factory(
            initial={
                "u0": {"kind": "constant", "value": 0.0},
                "v0": {"kind": "bump", "value": 1.0, "center": 0.5, "width": 0.15},
            },
            epsilon=0.0,
            horizon=0.1,
            stepping={"dt": 1e-3},
            output={"cadence": 0.01},
            experiments={"scale_dt": False},
        )
        report = refinement_study(base, levels=[16, 32, 64])
        assert report.complete
        assert len(report.v_errors) == 2
        assert len(report.u_orders) == len(report.v_orders) == 1
        assert len(report.weak_u_orders) == 2
        for order in report.v_orders:
            assert 1.7 <= order <= 2.3
        assert report.weak_u == [0.0, 0.0, 0.0]

    def test_rejects_bad_levels(self, config_factory):
        with pytest.raises(ValueError, match="levels must strictly refine"):
            refinement_study(config_factory(), levels=[16, 16, 32])

    def test_dt_sensitivity(self, config_factory):
        base = config_factory(grid={"cells": [16]}, horizon=0.5, output={"cadence": 0.05})
        report = inequality_dt_sensitivity(base)
        assert set(report.constants) == {"hminus", "energy"}
        for values in report.constants.values():
            assert len(values) == 2
