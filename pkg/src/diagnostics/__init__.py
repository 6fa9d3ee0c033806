"""
Chemotaxis Consumption Verifier - Diagnostics Module

Per-record functionals, cumulative bounds, inequality scans, weak residuals
and decay metrics over trajectories.
"""

from .records import DIAG_COLUMNS, EXT_COLUMNS, DiagRecord, Trajectory, TrajectoryMeta, snapshot
from .bounds import BoundReport, cumulative_bounds
from .inequalities import (
    ConstantEstimate,
    InequalityReport,
    SupersolutionFit,
    fit_supersolution,
    inequality_scan,
    minimal_constant,
    odi_supersolution,
)
from .weak import DualRateReport, TestFunction, cosine_bump_test, default_test, dual_rate_bound, weak_residual
from .decay import DecayReport, decay_metrics
from .reports import render_summary, render_yaml, write_report, write_summary

__all__ = [
    "DIAG_COLUMNS",
    "EXT_COLUMNS",
    "DiagRecord",
    "Trajectory",
    "TrajectoryMeta",
    "snapshot",
    "BoundReport",
    "cumulative_bounds",
    "ConstantEstimate",
    "InequalityReport",
    "SupersolutionFit",
    "fit_supersolution",
    "inequality_scan",
    "minimal_constant",
    "odi_supersolution",
    "DualRateReport",
    "TestFunction",
    "cosine_bump_test",
    "default_test",
    "dual_rate_bound",
    "weak_residual",
    "DecayReport",
    "decay_metrics",
    "render_summary",
    "render_yaml",
    "write_report",
    "write_summary",
]
