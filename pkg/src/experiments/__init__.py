"""
Chemotaxis Consumption Verifier - Experiments Module

Epsilon sweeps, relaxation from point masses and refinement studies built
from independent member runs.
"""

from .members import masses_agree, run_members
from .sweep import SweepReport, epsilon_sweep, nonlinearity_functional, validate_epsilons
from .relaxation import RelaxReport, relaxation_experiment, validate_grids, window_integral
from .refinement import (
    ConvergenceReport,
    SensitivityReport,
    inequality_dt_sensitivity,
    refinement_study,
    restrict,
    validate_levels,
)

__all__ = [
    "masses_agree",
    "run_members",
    "SweepReport",
    "epsilon_sweep",
    "nonlinearity_functional",
    "validate_epsilons",
    "RelaxReport",
    "relaxation_experiment",
    "validate_grids",
    "window_integral",
    "ConvergenceReport",
    "SensitivityReport",
    "inequality_dt_sensitivity",
    "refinement_study",
    "restrict",
    "validate_levels",
]
