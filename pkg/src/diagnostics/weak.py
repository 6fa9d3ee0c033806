"""
Chemotaxis Consumption Verifier - Weak Residuals

Residuals of the very weak formulation against separable test functions
psi(x, t) = X(x) T(t) with zero normal derivative and compact support in
time inside (0, T):

    r_u = | int int u psi_t + int int u phi_eps(v) Lap psi |
    r_v = | int int v psi_t + int int v Lap psi - int int u v / (1 + eps u) psi |

Space integrals use the midpoint rule on the grid, time integrals the
trapezoidal rule over the stored States; psi_t and Lap psi are analytic.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from ..geometry import Grid
from ..motility import RegularizedMotility
from .records import Trajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TestFunction:
    """
    Separable test function with analytic derivatives.

    space(grid) -> X at cell centers, laplacian(grid) -> Lap X,
    time(t) -> T(t), time_derivative(t) -> T'(t); support is the closed
    time interval outside which T vanishes identically.
    """
    __test__ = False

    space: Callable[[Grid], np.ndarray]
    laplacian: Callable[[Grid], np.ndarray]
    time: Callable[[np.ndarray], np.ndarray]
    time_derivative: Callable[[np.ndarray], np.ndarray]
    support: Tuple[float, float]
    label: str = ""


def _bump(t0: float, t1: float):
    half = 0.5 * (t1 - t0)
    mid = 0.5 * (t0 + t1)

    def value(t):
        s = (np.asarray(t, dtype=float) - mid) / half
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
        return out

    def derivative(t):
        s = (np.asarray(t, dtype=float) - mid) / half
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        si = s[inside]
        out[inside] = np.exp(-1.0 / (1.0 - si**2)) * (-2.0 * si / (1.0 - si**2) ** 2) / half
        return out

    return value, derivative


def cosine_bump_test(
    modes: Sequence[int],
    support: Tuple[float, float],
) -> TestFunction:
    """
    psi(x, t) = prod_i cos(k_i pi x_i / L_i) * bump(t).

    Args:
        modes: Wavenumber per axis (0 gives a spatially constant factor)
        support: (t0, t1) with 0 <= t0 < t1
    """
    t0, t1 = support
    if not (0.0 <= t0 < t1):
        raise ValueError(f"invalid time support {support}")
    modes = tuple(int(k) for k in modes)

    def wavenumbers(grid: Grid):
        if len(modes) != grid.dim:
            raise ValueError(f"test function has {len(modes)} modes, grid is {grid.dim}D")
        return [k * np.pi / L for k, L in zip(modes, grid.extents)]

    def space(grid: Grid) -> np.ndarray:
        out = np.ones(grid.shape)
        for x, w in zip(grid.mesh(), wavenumbers(grid)):
            out = out * np.cos(w * x)
        return out

    def laplacian(grid: Grid) -> np.ndarray:
        return -sum(w**2 for w in wavenumbers(grid)) * space(grid)

    value, derivative = _bump(t0, t1)
    return TestFunction(space, laplacian, value, derivative, (float(t0), float(t1)), f"cos{modes}*bump{support}")


def default_test(traj: Trajectory, modes: Optional[Sequence[int]] = None) -> TestFunction:
    """Lowest cosine mode with a bump over the middle 80% of the horizon."""
    horizon = traj.meta.horizon
    modes = modes or (1,) * traj.meta.dim
    return cosine_bump_test(modes, (0.1 * horizon, 0.9 * horizon))


def _require_states(traj: Trajectory, what: str):
    if len(traj.states) < 2:
        raise ValueError(f"{what} needs stored field snapshots (>= 2), got {len(traj.states)}")
    if traj.motility is None:
        raise ValueError(f"{what} needs the run's motility")


def weak_residual(traj: Trajectory, test: TestFunction) -> Tuple[float, float]:
    """
    Residuals (r_u, r_v) of the very weak formulation.

    Raises:
        ValueError: if the test support leaves [0, horizon] or no snapshots are stored
    """
    _require_states(traj, "weak residual")
    t0, t1 = test.support
    horizon = traj.states[-1].t
    if t0 < 0.0 or t1 > horizon:
        raise ValueError(f"test support {test.support} exceeds the run horizon [0, {horizon:g}]")

    grid = traj.states[0].grid
    cell = grid.cell_volume
    X = test.space(grid)
    lap_X = test.laplacian(grid)
    t = np.array([s.t for s in traj.states])
    T_val = test.time(t)
    T_dot = test.time_derivative(t)
    motility: RegularizedMotility = traj.motility

    integrand_u = np.empty(len(t))
    integrand_v = np.empty(len(t))
    for i, s in enumerate(traj.states):
        u = np.asarray(s.u.values)
        v = np.asarray(s.v.values)
        integrand_u[i] = cell * (
            T_dot[i] * np.sum(u * X) + T_val[i] * np.sum(u * motility.value_at(v) * lap_X)
        )
        integrand_v[i] = cell * (
            T_dot[i] * np.sum(v * X)
            + T_val[i] * np.sum(v * lap_X)
            - T_val[i] * np.sum(s.absorption_rate() * v * X)
        )
    r_u = abs(float(trapezoid(integrand_u, t)))
    r_v = abs(float(trapezoid(integrand_v, t)))
    logger.debug(f"Weak residuals for {test.label}: r_u={r_u:.3e}, r_v={r_v:.3e}")
    return r_u, r_v


@dataclass
class DualRateReport:
    """Largest ratio of |int w_t X| to its a priori bound, per component."""
    ratio_u: float
    ratio_v: float
    t_u: Optional[float]
    t_v: Optional[float]
    intervals: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def dual_rate_bound(traj: Trajectory, test: TestFunction) -> DualRateReport:
    """
    Check the dual-norm bounds on the time derivatives between snapshots:

        |int u_t X| <= ||u||_1 ||phi_eps(v)||_inf ||Lap X||_inf
        |int v_t X| <= ||v||_1 ||Lap X||_inf + ||u||_1 ||v||_inf ||X||_inf

    Ratios are <= 1 up to time-discretization error. Only the spatial factor
    of the test function is used.
    """
    _require_states(traj, "dual rate bound")
    grid = traj.states[0].grid
    cell = grid.cell_volume
    X = test.space(grid)
    lap_max = float(np.max(np.abs(test.laplacian(grid))))
    x_max = float(np.max(np.abs(X)))
    motility = traj.motility

    best_u, best_v, t_u, t_v = 0.0, 0.0, None, None
    for prev, new in zip(traj.states[:-1], traj.states[1:]):
        dt = new.t - prev.t
        du = cell * np.sum((np.asarray(new.u.values) - np.asarray(prev.u.values)) * X) / dt
        dv = cell * np.sum((np.asarray(new.v.values) - np.asarray(prev.v.values)) * X) / dt
        u1 = max(cell * np.sum(np.abs(s.u.values)) for s in (prev, new))
        v1 = max(cell * np.sum(np.abs(s.v.values)) for s in (prev, new))
        vinf = max(float(np.max(s.v.values)) for s in (prev, new))
        phi_inf = max(float(np.max(motility.value_at(s.v.values))) for s in (prev, new))

        bound_u = u1 * phi_inf * lap_max
        bound_v = v1 * lap_max + u1 * vinf * x_max
        ratio_u = abs(du) / bound_u if bound_u > 0 else (0.0 if du == 0 else np.inf)
        ratio_v = abs(dv) / bound_v if bound_v > 0 else (0.0 if dv == 0 else np.inf)
        if ratio_u > best_u:
            best_u, t_u = float(ratio_u), float(new.t)
        if ratio_v > best_v:
            best_v, t_v = float(ratio_v), float(new.t)

    return DualRateReport(best_u, best_v, t_u, t_v, len(traj.states) - 1)
