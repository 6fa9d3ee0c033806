"""
Regularized initial data.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.geometry import Field, build_grid, integrate, linf_norm, write_field
from src.initial_data import InitialSpec, U0Spec, V0Spec, realize


def spec(u0: dict, v0: dict, **extra) -> InitialSpec:
    return InitialSpec(u0=U0Spec(**u0), v0=V0Spec(**v0), **extra)


class TestRealize:
    """realize(spec, grid, eps)"""

    def test_constant_data(self):
        grid = build_grid(1, [1.0], [32])
        u0, v0 = realize(spec({"kind": "constant", "value": 2.0}, {"kind": "constant", "value": 1.0}), grid, 0.1)
        assert np.all(u0.values == 2.0)
        assert np.all(v0.values == 1.0)
        assert integrate(u0) == pytest.approx(2.0)

    def test_dirac_in_single_cell(self):
        grid = build_grid(1, [1.0], [64])
        u0, _ = realize(
            spec({"kind": "dirac", "center": 0.5, "mass": 1.0}, {"kind": "constant", "value": 1.0}), grid, 0.01
        )
        assert np.count_nonzero(u0.values) == 1
        assert u0.values[32] == 64.0
        assert integrate(u0) == 1.0
        assert float(np.sum(u0.values**2) * grid.cell_volume) == 64.0

    def test_dirac_in_rectangle(self):
        grid = build_grid(2, [1.0, 1.0], [8, 8])
        u0, _ = realize(
            spec({"kind": "dirac", "center": [0.1, 0.9], "mass": 2.0}, {"kind": "constant", "value": 1.0}), grid, 0.1
        )
        assert u0.values[0, 7] == pytest.approx(2.0 * 64)
        assert integrate(u0) == pytest.approx(2.0)

    def test_dirac_outside_domain(self):
        grid = build_grid(1, [1.0], [16])
        with pytest.raises(ValueError, match="outside"):
            realize(spec({"kind": "dirac", "center": 1.5, "mass": 1.0}, {"kind": "constant", "value": 1.0}), grid, 0.1)

    def test_bump_mass_is_exact(self):
        grid = build_grid(1, [1.0], [50])
        u0, _ = realize(
            spec({"kind": "bump", "center": 0.2, "width": 0.05, "mass": 3.0}, {"kind": "constant", "value": 1.0}),
            grid,
            0.1,
        )
        assert integrate(u0) == pytest.approx(3.0, rel=1e-14)
        assert u0.values.min() >= 0.0

    def test_positivity_floor(self):
        grid = build_grid(1, [1.0], [16])
        _, v0 = realize(spec({"kind": "constant", "value": 1.0}, {"kind": "constant", "value": 0.0}), grid, 0.01)
        assert np.all(v0.values == 0.01)

    def test_linf_cap(self):
        grid = build_grid(1, [1.0], [16])
        values = list(np.linspace(0.0, 2.0, 16))
        _, v0 = realize(spec({"kind": "constant", "value": 1.0}, {"kind": "values", "values": values}), grid, 0.5)
        assert v0.values.min() == 0.5
        assert linf_norm(v0) <= 2.0 + 1.0

    def test_v0_bump_is_grid_independent(self):
        data = spec({"kind": "constant", "value": 0.0}, {"kind": "bump", "value": 2.0, "center": 0.5, "width": 0.2})
        coarse, fine = build_grid(1, [1.0], [16]), build_grid(1, [1.0], [64])
        _, v_coarse = realize(data, coarse, 0.01)
        _, v_fine = realize(data, fine, 0.01)
        x = 0.5 + 0.5 / 16
        assert v_coarse.values[8] == pytest.approx(2.0 * np.exp(-((x - 0.5) ** 2) / 0.08))
        assert v_fine.values.max() <= 2.0

    def test_eps_zero_skips_floor(self):
        grid = build_grid(1, [1.0], [16])
        _, v0 = realize(spec({"kind": "constant", "value": 1.0}, {"kind": "constant", "value": 0.0}), grid, 0.0)
        assert np.all(v0.values == 0.0)

    def test_eps_out_of_range(self):
        grid = build_grid(1, [1.0], [16])
        with pytest.raises(ValueError, match="eps must lie in"):
            realize(spec({"kind": "constant", "value": 1.0}, {"kind": "constant", "value": 1.0}), grid, 1.0)

    def test_value_count_mismatch(self):
        grid = build_grid(1, [1.0], [16])
        with pytest.raises(ValueError, match="has 3 values"):
            realize(spec({"kind": "values", "values": [1.0, 2.0, 3.0]}, {"kind": "constant", "value": 1.0}), grid, 0.1)

    def test_from_snapshot_file(self, tmp_path):
        grid = build_grid(1, [1.0], [8])
        stored = Field(grid, np.arange(8.0), nonnegative=True, quantity="u")
        path = tmp_path / "u0.field"
        write_field(path, stored, 0.0)
        u0, _ = realize(spec({"kind": "file", "file": str(path)}, {"kind": "constant", "value": 1.0}), grid, 0.1)
        assert np.array_equal(u0.values, stored.values)

    def test_snapshot_on_other_grid(self, tmp_path):
        path = tmp_path / "u0.field"
        write_field(path, Field.constant(build_grid(1, [1.0], [8]), 1.0), 0.0)
        with pytest.raises(ValueError, match="lives on"):
            realize(
                spec({"kind": "file", "file": str(path)}, {"kind": "constant", "value": 1.0}),
                build_grid(1, [1.0], [16]),
                0.1,
            )


class TestSpecValidation:
    def test_negative_mass(self):
        with pytest.raises(ValidationError, match="mass must be >= 0"):
            U0Spec(kind="dirac", center=0.5, mass=-1.0)

    def test_missing_keys(self):
        with pytest.raises(ValidationError, match="requires width"):
            U0Spec(kind="bump", center=0.5, mass=1.0)

    def test_unknown_key(self):
        with pytest.raises(ValidationError):
            V0Spec(kind="constant", value=1.0, colour="red")
