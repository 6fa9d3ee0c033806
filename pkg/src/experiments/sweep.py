"""
Chemotaxis Consumption Verifier - Epsilon Sweep

Runs one configuration for a decreasing list of regularization parameters
and checks Cauchy behaviour of the terminal fields and of the saturated
nonlinearity

    I_eps(psi) = int_0^T int u v / (1 + eps u) psi.

Weak and weak-* convergence statements are replaced by L2 Cauchy criteria at
the terminal time.
"""

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from ..cli_io.run_config import RunConfig
from ..diagnostics import DiagRecord, Trajectory
from ..geometry import Grid
from .members import first_failure, masses_agree, run_members

logger = logging.getLogger(__name__)

REPORT_HEADER = (
    "epsilon sweep: weak convergence of the regularized family is replaced by\n"
    "L2 Cauchy distances of the terminal fields and of I_eps(psi)."
)


def _uniform_weight(grid: Grid) -> np.ndarray:
    return np.ones(grid.shape)


def _cosine_weight(grid: Grid) -> np.ndarray:
    out = np.ones(grid.shape)
    for x, L in zip(grid.mesh(), grid.extents):
        out = out * 0.5 * (1.0 + np.cos(np.pi * x / L))
    return out


WEIGHTS: Dict[str, Callable[[Grid], np.ndarray]] = {
    "uniform": _uniform_weight,
    "cosine": _cosine_weight,
}


@dataclass
class SweepReport:
    """Terminal records, Cauchy distances and nonlinearity functionals per epsilon."""
    epsilons: List[float]
    terminal: List[Dict[str, float]]
    distances: List[float]
    contracting: Optional[bool]
    functionals: Dict[str, List[float]]
    increments: Dict[str, List[float]]
    increments_decreasing: Dict[str, bool]
    frozen: Dict[str, List[float]]
    frozen_monotone: Optional[bool]
    mass0: float
    mass_consistent: bool
    complete: bool = True
    error: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def validate_epsilons(epsilons: Sequence[float]) -> List[float]:
    eps = [float(e) for e in epsilons]
    if len(eps) < 3:
        raise ValueError(f"≥ 3 entries required, got {len(eps)} epsilon value(s)")
    if any(not (0.0 <= e < 1.0) for e in eps):
        raise ValueError(f"epsilons must lie in [0, 1), got {eps}")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError(f"epsilons must be strictly decreasing, got {eps}")
    return eps


def nonlinearity_functional(traj: Trajectory, weight: np.ndarray, eps: Optional[float] = None) -> float:
    """
    I_eps(psi) over the stored States; eps defaults to the run's own value.

    Passing a different eps evaluates the saturated nonlinearity on frozen
    fields.
    """
    if len(traj.states) < 2:
        raise ValueError("nonlinearity functional needs stored field snapshots")
    eps = traj.meta.eps if eps is None else eps
    cell = traj.states[0].grid.cell_volume
    t = np.array([s.t for s in traj.states])
    values = []
    for s in traj.states:
        u = np.asarray(s.u.values)
        v = np.asarray(s.v.values)
        values.append(float(np.sum(u * v / (1.0 + eps * u) * weight) * cell))
    return float(trapezoid(values, t))


def _terminal_distance(a: Trajectory, b: Trajectory) -> float:
    sa, sb = a.states[-1], b.states[-1]
    cell = sa.grid.cell_volume
    du = np.sqrt(np.sum((np.asarray(sa.u.values) - np.asarray(sb.u.values)) ** 2) * cell)
    dv = np.sqrt(np.sum((np.asarray(sa.v.values) - np.asarray(sb.v.values)) ** 2) * cell)
    return float(du + dv)


def _strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def _record_dict(r: DiagRecord) -> Dict[str, float]:
    return r.core()


def epsilon_sweep(
    base: RunConfig,
    epsilons: Optional[Sequence[float]] = None,
    out_dir: Optional[Path] = None,
) -> SweepReport:
    """
    Run base for each epsilon and assemble the Cauchy report.

    Args:
        base: Shared grid, data and stepping
        epsilons: Strictly decreasing values in [0, 1), at least 3
            (defaults to base.experiments.epsilons)
        out_dir: Optional experiment directory for member runs

    Returns:
        SweepReport; complete=False if any member run failed
    """
    eps_list = validate_epsilons(base.experiments.epsilons if epsilons is None else epsilons)
    member_output = base.output.model_copy(update={"snapshots": True, "directory": None})
    configs = [base.with_updates(epsilon=e, output=member_output) for e in eps_list]
    labels = [f"eps_{i}" for i in range(len(eps_list))]
    trajectories = run_members(configs, labels, out_dir)

    failure = first_failure(trajectories, labels)
    mass0 = trajectories[0].meta.mass0
    report = SweepReport(
        epsilons=eps_list,
        terminal=[_record_dict(t.final) for t in trajectories],
        distances=[],
        contracting=None,
        functionals={},
        increments={},
        increments_decreasing={},
        frozen={},
        frozen_monotone=None,
        mass0=mass0,
        mass_consistent=masses_agree(trajectories),
        notes=[REPORT_HEADER.replace("\n", " ")],
    )
    if failure is not None:
        logger.error(f"Sweep aborted: {failure}")
        report.complete = False
        report.error = failure
        return report

    report.distances = [_terminal_distance(a, b) for a, b in zip(trajectories, trajectories[1:])]
    report.contracting = _strictly_decreasing(report.distances)

    grid = trajectories[0].states[0].grid
    for name, make_weight in WEIGHTS.items():
        weight = make_weight(grid)
        values = [nonlinearity_functional(traj, weight) for traj in trajectories]
        increments = [abs(b - a) for a, b in zip(values, values[1:])]
        report.functionals[name] = values
        report.increments[name] = increments
        report.increments_decreasing[name] = _strictly_decreasing(increments)
        # one stored trajectory, every epsilon: xi / (1 + eps xi) grows as eps falls
        report.frozen[name] = [nonlinearity_functional(trajectories[0], weight, e) for e in eps_list]

    report.frozen_monotone = all(
        all(b >= a for a, b in zip(vals, vals[1:])) for vals in report.frozen.values()
    )
    logger.info(f"Sweep distances {report.distances}, contracting={report.contracting}")
    return report
