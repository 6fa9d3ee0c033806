"""
Chemotaxis Consumption Verifier - Stepper Module

Structure-preserving IMEX stepping, the explicit Euler oracle and the run
driver.
"""

from .state import CflViolation, LinearSolverError, NumericalError, State, StepConfig, check_transition
from .schemes import ImexStepper, cfl_limits, dt_cfl, step_explicit, step_imex
from .runner import StepPlan, choose_dt, plan_steps, run

__all__ = [
    "CflViolation",
    "LinearSolverError",
    "NumericalError",
    "State",
    "StepConfig",
    "check_transition",
    "ImexStepper",
    "cfl_limits",
    "dt_cfl",
    "step_explicit",
    "step_imex",
    "StepPlan",
    "choose_dt",
    "plan_steps",
    "run",
]
