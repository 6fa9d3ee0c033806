"""
Chemotaxis Consumption Verifier - Refinement Studies

Self-convergence of terminal fields and weak residuals under joint
refinement of h (and dt), and the dt-sensitivity of the empirical
inequality constants.
"""

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..cli_io.run_config import RunConfig
from ..diagnostics import Trajectory, default_test, inequality_scan, weak_residual
from .members import first_failure, masses_agree, run_members

logger = logging.getLogger(__name__)

SENSITIVITY_LIMIT = 0.1


@dataclass
class ConvergenceReport:
    """Errors against the finest level and empirical orders per quantity."""
    levels: List[int]
    dts: List[float]
    u_errors: List[float]
    v_errors: List[float]
    u_orders: List[float]
    v_orders: List[float]
    weak_u: List[float]
    weak_v: List[float]
    weak_u_orders: List[float]
    weak_v_orders: List[float]
    mass0: float
    mass_consistent: bool
    complete: bool = True
    error: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def validate_levels(levels: Sequence[int]) -> List[int]:
    levels = [int(n) for n in levels]
    if len(levels) < 3:
        raise ValueError(f"refinement study needs >= 3 levels, got {len(levels)}")
    for coarse, fine in zip(levels, levels[1:]):
        if fine <= coarse or fine % coarse != 0:
            raise ValueError(f"levels must strictly refine, got {coarse} then {fine}")
    return levels


def restrict(values: np.ndarray, factor: int) -> np.ndarray:
    """Average blocks of factor cells per axis onto the coarse grid."""
    if values.ndim == 1:
        return values.reshape(-1, factor).mean(axis=1)
    n0, n1 = values.shape
    return values.reshape(n0 // factor, factor, n1 // factor, factor).mean(axis=(1, 3))


def _order(errors: Sequence[float], ratios: Sequence[float]) -> List[float]:
    orders = []
    for (e1, e2), r in zip(zip(errors, errors[1:]), ratios):
        if e1 > 0 and e2 > 0:
            orders.append(float(np.log(e1 / e2) / np.log(r)))
        else:
            orders.append(float("nan"))
    return orders


def _l2(diff: np.ndarray, cell: float) -> float:
    return float(np.sqrt(np.sum(diff**2) * cell))


def refinement_study(
    base: RunConfig,
    levels: Optional[Sequence[int]] = None,
    out_dir: Optional[Path] = None,
) -> ConvergenceReport:
    """
    Run base on refining grids and estimate convergence orders.

    Level entries are cell counts along axis 0; in 2D axis 1 is scaled by
    the same factor. dt scales with h unless experiments.scale_dt is false.
    Errors are measured against the finest level after restriction. Terminal
    orders come from differences of consecutive levels, so n levels give
    n - 2 orders per field; weak-residual orders give n - 1.

    Raises:
        ValueError: for fewer than 3 levels or levels that do not strictly refine
    """
    levels = validate_levels(base.experiments.levels if levels is None else levels)
    n0 = base.grid.cells[0]
    dt0 = base.stepping.dt
    configs, dts = [], []
    for n in levels:
        scale = n / levels[0]
        cells = [n] + [int(round(c * n / n0)) for c in base.grid.cells[1:]]
        dt = dt0 / scale if base.experiments.scale_dt else dt0
        dts.append(dt)
        configs.append(
            base.with_updates(
                grid=base.grid.model_copy(update={"cells": cells}),
                stepping=base.stepping.model_copy(update={"dt": dt, "cfl_cap": None}),
                output=base.output.model_copy(update={"snapshots": True, "directory": None}),
            )
        )
    labels = [f"level_{n}" for n in levels]
    trajectories: List[Trajectory] = run_members(configs, labels, out_dir)

    report = ConvergenceReport(
        levels=levels,
        dts=dts,
        u_errors=[],
        v_errors=[],
        u_orders=[],
        v_orders=[],
        weak_u=[],
        weak_v=[],
        weak_u_orders=[],
        weak_v_orders=[],
        mass0=trajectories[0].meta.mass0,
        mass_consistent=masses_agree(trajectories),
        notes=["orders from consecutive-level differences; errors against the finest level"],
    )
    failure = first_failure(trajectories, labels)
    if failure is not None:
        logger.error(f"Refinement study aborted: {failure}")
        report.complete = False
        report.error = failure
        return report

    finals = [traj.states[-1] for traj in trajectories]
    finest = finals[-1]
    ratios = [b // a for a, b in zip(levels, levels[1:])]
    u_diffs, v_diffs = [], []
    for i, s in enumerate(finals[:-1]):
        cell = s.grid.cell_volume
        factor = levels[-1] // levels[i]
        report.u_errors.append(_l2(restrict(np.asarray(finest.u.values), factor) - s.u.values, cell))
        report.v_errors.append(_l2(restrict(np.asarray(finest.v.values), factor) - s.v.values, cell))
        nxt = finals[i + 1]
        u_diffs.append(_l2(restrict(np.asarray(nxt.u.values), ratios[i]) - s.u.values, cell))
        v_diffs.append(_l2(restrict(np.asarray(nxt.v.values), ratios[i]) - s.v.values, cell))
    report.u_orders = _order(u_diffs, ratios)
    report.v_orders = _order(v_diffs, ratios)

    for traj in trajectories:
        r_u, r_v = weak_residual(traj, default_test(traj))
        report.weak_u.append(r_u)
        report.weak_v.append(r_v)
    report.weak_u_orders = _order(report.weak_u, ratios)
    report.weak_v_orders = _order(report.weak_v, ratios)

    logger.info(f"Refinement orders: u {report.u_orders}, v {report.v_orders}, weak u {report.weak_u_orders}")
    return report


@dataclass
class SensitivityReport:
    """Inequality constants at dt and dt/2."""
    dt: float
    constants: Dict[str, List[float]]
    relative_change: Dict[str, float]
    stable: Dict[str, bool]
    low_confidence: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def inequality_dt_sensitivity(
    base: RunConfig,
    names: Sequence[str] = ("hminus", "energy"),
) -> SensitivityReport:
    """
    Rerun base with the step halved and compare the minimal constants.

    Raises:
        ValueError: if either run fails
    """
    first = run_members([base], ["dt"])[0]
    dt = first.meta.dt
    halved = base.with_updates(stepping=base.stepping.model_copy(update={"dt": dt / 2.0, "cfl_cap": None}))
    second = run_members([halved], ["dt_half"])[0]
    failure = first_failure([first, second], ["dt", "dt_half"])
    if failure is not None:
        raise ValueError(f"sensitivity run failed: {failure}")

    min_rate = base.diagnostics.min_records_per_unit_time
    scans = [inequality_scan(traj, min_rate) for traj in (first, second)]
    constants, change, stable = {}, {}, {}
    for name in names:
        values = [scan.value(name) for scan in scans]
        constants[name] = values
        if values[0] == 0.0 and values[1] == 0.0:
            change[name] = 0.0
        elif values[0] == 0.0 or not np.all(np.isfinite(values)):
            change[name] = float("inf")
        else:
            change[name] = abs(values[1] - values[0]) / abs(values[0])
        stable[name] = change[name] < SENSITIVITY_LIMIT
    return SensitivityReport(
        dt=dt,
        constants=constants,
        relative_change=change,
        stable=stable,
        low_confidence=any(scan.low_confidence for scan in scans),
    )
