"""
Chemotaxis Consumption Verifier - Time Stepping Schemes

Discretizations of the regularized system

    u_t = Lap(u phi_eps(v)),    v_t = Lap v - u v / (1 + eps u)

with zero-flux boundaries:

- IMEX: implicit diffusion and absorption with coefficients lagged at t_n,
  v first, then u with phi_eps(v^{n+1}). Both matrices are M-matrices, so
  positivity, exact mass conservation and the discrete maximum principle
  for v hold independently of dt. Krylov solutions (2D) are cut off at the
  bounds the exact solution satisfies, and u is rescaled to its exact sum.
- Explicit Euler: the oracle discretization, stable under dt_cfl.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from ..geometry import Grid, laplacian_array
from ..motility import RegularizedMotility
from .solvers import (
    SparseSystems,
    direct_solve,
    krylov_solve,
    relative_residual,
    solve_u_banded,
    solve_v_banded,
)
from .state import CflViolation, State, StepConfig

logger = logging.getLogger(__name__)

CFL_SLACK = 1e-12


def cfl_limits(s: State, motility: RegularizedMotility) -> Tuple[float, float]:
    """
    Explicit stability limits (u-equation, v-equation) without safety factor.

    u: h^2 / (2 dim max phi_eps(v));  v: min(h^2 / (2 dim), 1 / max u/(1+eps u))
    """
    grid = s.grid
    diffusion = min(grid.h) ** 2 / (2.0 * grid.dim)
    phi_max = float(np.max(motility.value_at(s.v.values)))
    rate = float(np.max(s.absorption_rate()))
    v_limit = diffusion if rate <= 0.0 else min(diffusion, 1.0 / rate)
    return diffusion / phi_max, v_limit


def dt_cfl(s: State, motility: RegularizedMotility, dt_safety: float = 0.9) -> float:
    """
    Explicit stability limit of the current state.

    Args:
        s: Current state
        motility: phi_eps
        dt_safety: Safety factor in (0, 1]

    Returns:
        dt_safety times the smaller of the two cfl_limits
    """
    return dt_safety * min(cfl_limits(s, motility))


def step_explicit(
    s: State,
    dt: float,
    motility: RegularizedMotility,
    dt_safety: float = 1.0,
) -> State:
    """
    Forward Euler step of the regularized system.

    Raises:
        CflViolation: if dt exceeds dt_cfl(s, motility, dt_safety)
    """
    limit = dt_cfl(s, motility, dt_safety)
    if dt > limit * (1.0 + CFL_SLACK):
        raise CflViolation(f"dt={dt:.3e} exceeds explicit limit {limit:.3e} at t={s.t:.6g}", t=s.t)

    grid = s.grid
    u, v = s.u.values, s.v.values
    phi = motility.value_at(v)
    u_new = u + dt * laplacian_array(phi * u, grid)
    v_new = v + dt * (laplacian_array(v, grid) - s.absorption_rate() * v)
    return s.advance(dt, u_new, v_new)


class ImexStepper:
    """
    IMEX stepper bound to one grid and step configuration.

    Keeps the sparse Laplacian for 2D solves and the largest relative
    linear residual seen so far (0 for exact banded solves).
    """

    def __init__(self, grid: Grid, motility: RegularizedMotility, config: Optional[StepConfig] = None):
        self.grid = grid
        self.motility = motility
        self.config = config or StepConfig()
        solver = self.config.solver
        if solver == "auto":
            solver = "banded" if grid.dim == 1 else "krylov"
        if solver == "banded" and grid.dim != 1:
            raise ValueError("banded solver is only available in 1D")
        self.solver = solver
        self._systems = SparseSystems(grid) if solver != "banded" else None
        self.max_residual = 0.0
        logger.debug(f"IMEX stepper on {grid.describe()} with {solver} solves")

    def step(self, s: State, dt: float) -> State:
        if dt <= 0:
            raise ValueError(f"dt must be > 0, got {dt}")
        u, v = s.u.values, s.v.values
        w = s.absorption_rate()

        if self.solver == "banded":
            v_new = solve_v_banded(self.grid, dt, w, v)
            phi = self.motility.value_at(v_new)
            u_new = solve_u_banded(self.grid, dt, phi, u)
        else:
            v_new = self._solve_v(dt, w, v)
            phi = self.motility.value_at(v_new)
            u_new = self._solve_u(dt, phi, u)

        return s.advance(dt, u_new.reshape(self.grid.shape), v_new.reshape(self.grid.shape))

    def _solve_v(self, dt: float, w: np.ndarray, v: np.ndarray) -> np.ndarray:
        matrix = self._systems.v_matrix(dt, w)
        rhs = v.ravel()
        if self.solver == "direct":
            x, residual = direct_solve(matrix, rhs)
        else:
            x, residual = krylov_solve(
                matrix, rhs, rhs, self.config.tolerance, self.config.max_iterations
            )
            # the exact solution lies in [0, max v^n]; clip CG error outside it
            x = np.clip(x, 0.0, float(rhs.max()))
        self.max_residual = max(self.max_residual, residual)
        return x

    def _solve_u(self, dt: float, phi: np.ndarray, u: np.ndarray) -> np.ndarray:
        rhs = u.ravel()
        if self.solver == "direct":
            x, residual = direct_solve(self._systems.u_matrix(dt, phi), rhs)
        else:
            root = np.sqrt(phi.ravel())
            sym_rhs = root * rhs
            y, _ = krylov_solve(
                self._systems.u_matrix_symmetric(dt, phi),
                sym_rhs,
                sym_rhs,
                self.config.tolerance,
                self.config.max_iterations,
            )
            x = np.maximum(y / root, 0.0)
            # columns of the u-system sum to one: restore sum(x) = sum(rhs) lost to the CG tolerance
            total = x.sum()
            if total > 0:
                x = x * (rhs.sum() / total)
            residual = relative_residual(self._systems.u_matrix(dt, phi), x, rhs)
        self.max_residual = max(self.max_residual, residual)
        return x


def step_imex(
    s: State,
    dt: float,
    motility: RegularizedMotility,
    config: Optional[StepConfig] = None,
) -> State:
    """
    One IMEX step (two decoupled linear solves, coefficients lagged at t).

    Args:
        s: Current state
        dt: Step size (> 0)
        motility: phi_eps
        config: Solver settings (defaults: banded in 1D, CG in 2D)

    Returns:
        State at t + dt
    """
    return ImexStepper(s.grid, motility, config).step(s, dt)
