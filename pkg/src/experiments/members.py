"""
Chemotaxis Consumption Verifier - Member Runs

Runs the independent member configurations of an experiment, sequentially
or in worker processes, and returns trajectories in input order.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from ..cli_io.run_config import RunConfig
from ..cli_io.series import write_series
from ..config import settings
from ..diagnostics import Trajectory
from ..stepper import run

logger = logging.getLogger(__name__)

MASS_AGREEMENT = 1e-12


def run_members(
    configs: Sequence[RunConfig],
    labels: Sequence[str],
    out_dir: Optional[Path] = None,
    max_workers: Optional[int] = None,
) -> List[Trajectory]:
    """
    Run member configurations; results keep the order of configs.

    Args:
        configs: Member run configurations
        labels: Subdirectory name per member when out_dir is given
        out_dir: Experiment directory; members are written to out_dir/<label>
        max_workers: Worker processes (defaults to settings.max_workers)
    """
    workers = settings.max_workers if max_workers is None else max_workers
    logger.info(f"Running {len(configs)} members with {max(1, workers)} worker(s)")
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            trajectories = list(executor.map(run, configs))
    else:
        trajectories = [run(config) for config in configs]

    if out_dir is not None:
        for label, traj in zip(labels, trajectories):
            write_series(traj, Path(out_dir) / label)
    return trajectories


def first_failure(trajectories: Sequence[Trajectory], labels: Sequence[str]) -> Optional[str]:
    for label, traj in zip(labels, trajectories):
        if not traj.complete:
            return f"{label}: {traj.error}"
    return None


def masses_agree(trajectories: Sequence[Trajectory]) -> bool:
    """All members start from the same mass (relative 1e-12)."""
    masses = np.array([traj.meta.mass0 for traj in trajectories])
    scale = max(float(np.max(np.abs(masses))), 1e-300)
    return bool(np.max(masses) - np.min(masses) <= MASS_AGREEMENT * scale)
