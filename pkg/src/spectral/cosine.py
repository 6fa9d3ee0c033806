"""
Chemotaxis Consumption Verifier - Neumann Cosine Spectral Tools

The cell-centered Neumann Laplacian on a tensor grid is diagonalized by the
orthonormal type-II discrete cosine transform. Mode k along an axis with N
cells is cos(k pi x_j / L) sampled at cell centers x_j, with eigenvalue

    lambda_k = (2 / h^2) (1 - cos(k pi h / L))

of -Lap_h; 2D eigenvalues are sums over the axes. Coefficients use the
orthonormal convention, so ||f||^2_{L2} = cell_volume * sum_k |c_k|^2.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.fft import dctn, idctn
from scipy.sparse.linalg import spsolve

from ..geometry import Field, Grid, inner, l2_norm_sq, laplacian_matrix

logger = logging.getLogger(__name__)

MEAN_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class CosineCoeffs:
    """Cosine coefficients of a Field with the matching stencil eigenvalues."""
    grid: Grid
    coeffs: np.ndarray
    eigenvalues: np.ndarray

    def norm_sq(self) -> float:
        """Weighted coefficient sum, equal to the squared L2 norm of the field."""
        return float(np.sum(self.coeffs**2) * self.grid.cell_volume)

    def mean_mode(self) -> float:
        return float(self.coeffs[(0,) * self.grid.dim])


def discrete_eigenvalues(grid: Grid) -> np.ndarray:
    """Eigenvalues of -Lap_h indexed like the coefficient array (lambda_0 = 0)."""
    total = np.zeros(grid.shape)
    for axis, (n, h, L) in enumerate(zip(grid.cells, grid.h, grid.extents)):
        k = np.arange(n)
        lam = (2.0 / h**2) * (1.0 - np.cos(k * np.pi * h / L))
        shape = [1] * grid.dim
        shape[axis] = n
        total = total + lam.reshape(shape)
    return total


def to_cosine(f: Field) -> CosineCoeffs:
    """Orthonormal DCT-II of a Field."""
    coeffs = dctn(np.asarray(f.values), type=2, norm="ortho")
    return CosineCoeffs(grid=f.grid, coeffs=coeffs, eigenvalues=discrete_eigenvalues(f.grid))


def from_cosine(c: CosineCoeffs, quantity: str = "") -> Field:
    """Inverse of to_cosine."""
    return Field(c.grid, idctn(c.coeffs, type=2, norm="ortho"), quantity=quantity)


def _mean_discrepancy(f: Field, ubar: Optional[float]) -> float:
    if ubar is None:
        return 0.0
    discrepancy = abs(f.mean() - ubar)
    if discrepancy > MEAN_TOLERANCE * max(1.0, abs(ubar)):
        logger.warning(
            f"mean of field ({f.mean():.17g}) differs from ubar ({ubar:.17g}) by {discrepancy:.3e}; "
            f"subtracting the actual mean"
        )
    return discrepancy


def hminus_half_norm_sq(f: Field, ubar: Optional[float] = None) -> float:
    """
    ||A_h^{-1/2}(f - mean f)||^2 via the cosine expansion.

    Args:
        f: Field (typically u)
        ubar: Expected mean; a mismatch is logged and the actual mean is used

    Returns:
        cell_volume * sum_{k != 0} |c_k|^2 / lambda_k
    """
    _mean_discrepancy(f, ubar)
    c = to_cosine(f)
    lam = c.eigenvalues
    mask = lam > 0
    return float(np.sum(c.coeffs[mask] ** 2 / lam[mask]) * f.grid.cell_volume)


def hminus_half_norm_sq_variational(f: Field) -> float:
    """
    Direct-solve counterpart of hminus_half_norm_sq.

    Solves -Lap_h w = f - mean f in the mean-zero class through the bordered
    system [[-L, 1], [1^T, 0]] and returns <w, f - mean f>.
    """
    grid = f.grid
    g = np.asarray(f.values).ravel() - f.mean()
    ones = sp.csr_matrix(np.ones((grid.size, 1)))
    bordered = sp.bmat([[-laplacian_matrix(grid), ones], [ones.T, None]], format="csc")
    solution = spsolve(bordered, np.append(g, 0.0))
    w = Field(grid, solution[:-1])
    return inner(w, Field(grid, g))


def fractional_inverse(f: Field, beta: float) -> Field:
    """
    A_h^{-beta} applied to the mean-zero part of f (the mean mode maps to 0).
    """
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    c = to_cosine(f)
    lam = c.eigenvalues
    scaled = np.zeros_like(c.coeffs)
    mask = lam > 0
    scaled[mask] = c.coeffs[mask] * lam[mask] ** (-beta)
    return from_cosine(CosineCoeffs(c.grid, scaled, lam), quantity=f.quantity)


def interpolation_exponent(beta: float) -> float:
    """theta = (2 beta - 1) / (2 beta)."""
    return (2.0 * beta - 1.0) / (2.0 * beta)


def interpolation_constant(fields: Iterable[Field], beta: float = 1.0) -> float:
    """
    Best constant c in ||A^{-1/2} f|| <= c ||f||^theta ||A^{-beta} f||^(1-theta).

    Fields are projected to mean zero first; fields vanishing after the
    projection are skipped.
    """
    if beta <= 0.5:
        raise ValueError(f"beta must be > 1/2, got {beta}")
    theta = interpolation_exponent(beta)
    best = 0.0
    for f in fields:
        centered = f.with_values(np.asarray(f.values) - f.mean(), nonnegative=False)
        norm = np.sqrt(l2_norm_sq(centered))
        if norm == 0.0:
            continue
        lhs = np.sqrt(hminus_half_norm_sq(centered))
        rhs = norm**theta * np.sqrt(l2_norm_sq(fractional_inverse(centered, beta))) ** (1.0 - theta)
        best = max(best, float(lhs / rhs))
    return best
