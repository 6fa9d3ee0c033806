"""
Chemotaxis Consumption Verifier - Linear Solvers

The two implicit systems of the IMEX step,

    v-system: (I - dt Lap_h + dt diag(w)) v = rhs       (symmetric M-matrix)
    u-system: (I - dt Lap_h diag(phi)) u = rhs          (column sums one)

are tridiagonal in 1D and solved directly with a banded LU. In 2D they are
solved with conjugate gradients; the u-system is symmetrized first by the
similarity transform diag(phi)^(1/2).
"""

import logging
from typing import Tuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded
from scipy.sparse.linalg import cg, spsolve
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from ..geometry import Grid, laplacian_matrix
from .state import LinearSolverError

logger = logging.getLogger(__name__)

KRYLOV_ATTEMPTS = 3


def _boundary_weights(cells: int) -> np.ndarray:
    """Number of interior neighbours per cell along one axis."""
    c = np.full(cells, 2.0)
    c[0] = c[-1] = 1.0
    return c


def solve_v_banded(grid: Grid, dt: float, w: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Tridiagonal v-system (1D)."""
    h2 = grid.h[0] ** 2
    n = grid.cells[0]
    ab = np.zeros((3, n))
    ab[0, 1:] = -dt / h2
    ab[1, :] = 1.0 + dt * _boundary_weights(n) / h2 + dt * w
    ab[2, :-1] = -dt / h2
    return solve_banded((1, 1), ab, rhs, check_finite=False)


def solve_u_banded(grid: Grid, dt: float, phi: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Tridiagonal u-system (1D).

    Column j of Lap_h diag(phi) is phi_j times column j of Lap_h, so every
    column of the system matrix sums to one.
    """
    h2 = grid.h[0] ** 2
    n = grid.cells[0]
    ab = np.zeros((3, n))
    ab[0, 1:] = -dt * phi[1:] / h2
    ab[1, :] = 1.0 + dt * _boundary_weights(n) * phi / h2
    ab[2, :-1] = -dt * phi[:-1] / h2
    return solve_banded((1, 1), ab, rhs, check_finite=False)


class SparseSystems:
    """Sparse assembly of both systems for one grid (Laplacian cached)."""

    def __init__(self, grid: Grid):
        self.grid = grid
        self.lap = laplacian_matrix(grid)
        self.eye = sp.identity(grid.size, format="csr")

    def v_matrix(self, dt: float, w: np.ndarray) -> sp.csr_matrix:
        return (self.eye - dt * self.lap + dt * sp.diags(w.ravel())).tocsr()

    def u_matrix(self, dt: float, phi: np.ndarray) -> sp.csr_matrix:
        return (self.eye - dt * (self.lap @ sp.diags(phi.ravel()))).tocsr()

    def u_matrix_symmetric(self, dt: float, phi: np.ndarray) -> sp.csr_matrix:
        root = sp.diags(np.sqrt(phi.ravel()))
        return (self.eye - dt * (root @ self.lap @ root)).tocsr()


def relative_residual(matrix: sp.spmatrix, x: np.ndarray, rhs: np.ndarray) -> float:
    """||rhs - A x|| / ||rhs|| (0 for a zero right-hand side solved exactly)."""
    r = np.linalg.norm(rhs - matrix @ x)
    scale = np.linalg.norm(rhs)
    return float(r / scale) if scale > 0 else float(r)


def krylov_solve(
    matrix: sp.spmatrix,
    rhs: np.ndarray,
    x0: np.ndarray,
    tolerance: float,
    max_iterations: int,
) -> Tuple[np.ndarray, float]:
    """
    Conjugate gradients with an escalating iteration budget.

    Each retry doubles maxiter and restarts from the last iterate.

    Returns:
        (solution, relative residual)

    Raises:
        LinearSolverError: if the tolerance is missed after all attempts
    """
    if not np.any(rhs):
        return np.zeros_like(rhs), 0.0

    guess = {"x": x0}
    for attempt in Retrying(
        stop=stop_after_attempt(KRYLOV_ATTEMPTS),
        retry=retry_if_exception_type(LinearSolverError),
        reraise=True,
    ):
        with attempt:
            budget = max_iterations * 2 ** (attempt.retry_state.attempt_number - 1)
            x, info = cg(matrix, rhs, x0=guess["x"], rtol=tolerance, atol=0.0, maxiter=budget)
            guess["x"] = x
            residual = relative_residual(matrix, x, rhs)
            if info != 0 and residual > tolerance:
                logger.warning(
                    f"CG missed tolerance {tolerance:.1e} (residual {residual:.2e}, maxiter {budget})"
                )
                raise LinearSolverError(
                    f"conjugate gradients did not converge (residual {residual:.2e})",
                    residual=residual,
                )
    return x, residual


def direct_solve(matrix: sp.spmatrix, rhs: np.ndarray) -> Tuple[np.ndarray, float]:
    """Sparse LU solve."""
    x = spsolve(matrix.tocsc(), rhs)
    return x, relative_residual(matrix, x, rhs)
