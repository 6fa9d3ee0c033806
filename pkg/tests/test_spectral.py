"""
Cosine eigenbasis, the H^-1 type functional and fractional inverses.
"""

import logging
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.geometry import Field, build_grid, l2_norm_sq, laplacian_matrix
from src.spectral import (
    discrete_eigenvalues,
    fractional_inverse,
    from_cosine,
    hminus_half_norm_sq,
    hminus_half_norm_sq_variational,
    interpolation_constant,
    interpolation_exponent,
    to_cosine,
)


class TestCosineTransform:
    """to_cosine / from_cosine"""

    def test_constant_has_only_mean_mode(self):
        grid = build_grid(1, [1.0], [32])
        c = to_cosine(Field.constant(grid, 2.0))
        assert c.mean_mode() == pytest.approx(2.0 * np.sqrt(32))
        assert np.max(np.abs(c.coeffs[1:])) < 1e-12

    def test_first_mode_is_pure(self):
        grid = build_grid(1, [2.0], [32])
        c = to_cosine(Field.from_function(grid, lambda x: np.cos(np.pi * x / 2.0)))
        others = np.delete(c.coeffs, 1)
        assert abs(c.coeffs[1]) > 1.0
        assert np.max(np.abs(others)) < 1e-12

    def test_round_trip(self):
        grid = build_grid(2, [1.0, 2.0], [8, 16])
        f = Field(grid, np.random.default_rng(0).random(grid.shape))
        np.testing.assert_allclose(from_cosine(to_cosine(f)).values, f.values, atol=1e-12)

    def test_parseval(self):
        grid = build_grid(2, [1.0, 1.0], [16, 8])
        f = Field(grid, np.random.default_rng(1).random(grid.shape))
        assert to_cosine(f).norm_sq() == pytest.approx(l2_norm_sq(f), rel=1e-12)

    @pytest.mark.parametrize("dim,extents,cells", [(1, [1.0], [16]), (2, [1.0, 2.0], [8, 4])])
    def test_eigenvalues_match_matrix(self, dim, extents, cells):
        grid = build_grid(dim, extents, cells)
        numeric = np.sort(np.linalg.eigvalsh(-laplacian_matrix(grid).toarray()))
        expected = np.sort(discrete_eigenvalues(grid).ravel())
        np.testing.assert_allclose(numeric, expected, atol=1e-9)
        assert discrete_eigenvalues(grid).flat[0] == 0.0


class TestHMinusNorm:
    """hminus_half_norm_sq"""

    def test_constant_field(self):
        grid = build_grid(1, [1.0], [32])
        assert hminus_half_norm_sq(Field.constant(grid, 3.0), 3.0) < 1e-28

    def test_first_mode_value(self):
        grid = build_grid(1, [np.pi], [256])
        h = grid.h[0]
        f = Field.from_function(grid, lambda x: 1.0 + np.cos(x))
        lam = (2.0 / h**2) * (1.0 - np.cos(h))
        value = hminus_half_norm_sq(f, 1.0)
        assert value == pytest.approx((np.pi / 2.0) / lam, rel=1e-10)
        assert value == pytest.approx(np.pi / 2.0, abs=1e-3)

    def test_quadratic_scaling(self):
        grid = build_grid(1, [1.0], [64])
        f = Field(grid, np.random.default_rng(2).random(64))
        assert hminus_half_norm_sq(f.with_values(3.0 * f.values)) == pytest.approx(9.0 * hminus_half_norm_sq(f))

    def test_agrees_with_variational_form(self):
        rng = np.random.default_rng(3)
        for grid in (build_grid(1, [1.0], [64]), build_grid(2, [1.0, 1.0], [12, 12])):
            for _ in range(20):
                f = Field(grid, rng.random(grid.shape))
                spectral = hminus_half_norm_sq(f)
                direct = hminus_half_norm_sq_variational(f)
                assert spectral == pytest.approx(direct, rel=1e-10)

    def test_mean_mismatch_logged(self, caplog):
        grid = build_grid(1, [1.0], [16])
        f = Field.constant(grid, 1.0)
        with caplog.at_level(logging.WARNING):
            hminus_half_norm_sq(f, 2.0)
        assert "differs from ubar" in caplog.text


class TestFractionalInverse:
    def test_eigenfunction_scaling(self):
        grid = build_grid(1, [1.0], [32])
        f = Field.from_function(grid, lambda x: np.cos(np.pi * x))
        lam = discrete_eigenvalues(grid)[1]
        out = fractional_inverse(f, 1.0)
        np.testing.assert_allclose(out.values, f.values / lam, atol=1e-13)

    def test_semigroup(self):
        grid = build_grid(1, [1.0], [32])
        f = Field(grid, np.random.default_rng(4).random(32))
        twice = fractional_inverse(fractional_inverse(f, 0.5), 0.5)
        np.testing.assert_allclose(twice.values, fractional_inverse(f, 1.0).values, atol=1e-12)

    def test_mean_removed(self):
        grid = build_grid(1, [1.0], [16])
        assert np.max(np.abs(fractional_inverse(Field.constant(grid, 5.0), 1.0).values)) < 1e-12

    def test_positive_power_required(self):
        grid = build_grid(1, [1.0], [16])
        with pytest.raises(ValueError):
            fractional_inverse(Field.constant(grid, 1.0), 0.0)

    def test_per_mode_monotonicity_in_beta(self):
        # L = 4 puts the first nonzero eigenvalue below 1
        grid = build_grid(1, [4.0], [32])
        values = np.random.default_rng(11).standard_normal(32)
        values -= values.mean()
        f = Field(grid, values / np.sqrt(l2_norm_sq(Field(grid, values))))
        lam = discrete_eigenvalues(grid)
        modes = lam > 0
        small = modes & (lam < 1.0)
        assert small.any() and (modes & ~small).any()
        for beta_hi, beta_lo in ((1.0, 0.5), (2.0, 1.0), (1.5, 0.25)):
            hi = np.abs(to_cosine(fractional_inverse(f, beta_hi)).coeffs)
            lo = np.abs(to_cosine(fractional_inverse(f, beta_lo)).coeffs)
            assert np.all(hi[modes & ~small] <= lo[modes & ~small] + 1e-13)
            assert np.all(hi[small] >= lo[small] - 1e-13)
            np.testing.assert_allclose(hi[modes], lo[modes] * lam[modes] ** (beta_lo - beta_hi), rtol=1e-9, atol=1e-13)


class TestInterpolation:
    def test_exponent(self):
        assert interpolation_exponent(1.0) == pytest.approx(0.5)
        assert interpolation_exponent(2.0) == pytest.approx(0.75)

    def test_cauchy_schwarz_case(self):
        grid = build_grid(1, [1.0], [64])
        rng = np.random.default_rng(5)
        fields = [Field(grid, rng.random(64)) for _ in range(10)]
        c = interpolation_constant(fields, beta=1.0)
        assert 0.0 < c <= 1.0 + 1e-12

    def test_single_mode_is_sharp(self):
        grid = build_grid(1, [1.0], [64])
        f = Field.from_function(grid, lambda x: np.cos(3 * np.pi * x))
        assert interpolation_constant([f], beta=1.0) == pytest.approx(1.0, rel=1e-10)

    def test_constant_fields_skipped(self):
        grid = build_grid(1, [1.0], [16])
        assert interpolation_constant([Field.constant(grid, 1.0)], beta=1.0) == 0.0

    def test_beta_range(self):
        grid = build_grid(1, [1.0], [16])
        with pytest.raises(ValueError, match="beta must be > 1/2"):
            interpolation_constant([Field.constant(grid, 1.0)], beta=0.5)
