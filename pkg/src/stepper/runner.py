"""
Chemotaxis Consumption Verifier - Run Driver

Drives the regularized system from t = 0 to the horizon T: builds grid,
motility and initial data from a RunConfig, plans a uniform step that
divides the output cadence, guards the structural invariants after every
step and records diagnostics at the cadence.

Runs are deterministic: dt = T / n_steps and record times are T * i / n_steps.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, List

import numpy as np

from ..diagnostics.records import DiagRecord, Trajectory, TrajectoryMeta, snapshot
from ..geometry import build_grid, linf_norm
from ..initial_data import realize, source_v0
from ..motility import RegularizedMotility, motility_for
from .schemes import ImexStepper, cfl_limits, dt_cfl, step_explicit
from .state import NumericalError, State, StepConfig, check_transition

if TYPE_CHECKING:
    from ..cli_io.run_config import RunConfig

logger = logging.getLogger(__name__)

CADENCE_TOLERANCE = 1e-9
PHI_SAMPLES = 2001


@dataclass
class StepPlan:
    """Uniform step layout: n_out records after t = 0, stride steps apart."""
    n_out: int
    stride: int
    n_steps: int
    dt: float
    cadence: float
    warnings: List[str] = field(default_factory=list)


def plan_steps(horizon: float, cadence: float, dt_requested: float) -> StepPlan:
    """
    Lay out steps so that every output time is hit exactly.

    If T / cadence is not an integer the cadence is snapped down to
    T / ceil(T / cadence) and a warning is recorded. The step is the largest
    dt <= dt_requested that divides the (snapped) cadence.

    Args:
        horizon: Final time T >= 0
        cadence: Requested output interval (> 0)
        dt_requested: Largest admissible step (> 0)
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    if cadence <= 0 or dt_requested <= 0:
        raise ValueError("cadence and dt must be > 0")
    if horizon == 0:
        return StepPlan(n_out=0, stride=1, n_steps=0, dt=dt_requested, cadence=cadence)

    warnings = []
    ratio = horizon / cadence
    n_out = max(1, int(round(ratio)))
    if abs(ratio - n_out) > CADENCE_TOLERANCE * max(1.0, ratio):
        n_out = max(1, math.ceil(ratio))
        snapped = horizon / n_out
        message = f"cadence {cadence:g} does not divide T={horizon:g}; snapped down to {snapped:.17g}"
        logger.warning(message)
        warnings.append(message)
    interval = horizon / n_out
    stride = max(1, math.ceil(interval / dt_requested * (1.0 - CADENCE_TOLERANCE)))
    n_steps = n_out * stride
    return StepPlan(
        n_out=n_out,
        stride=stride,
        n_steps=n_steps,
        dt=horizon / n_steps,
        cadence=interval,
        warnings=warnings,
    )


def _explicit_dt(s: State, motility: RegularizedMotility, config: StepConfig) -> float:
    """
    Explicit step for the whole run.

    The u-limit uses max phi_eps over [0, ||v0||_inf], which bounds phi_eps(v)
    for all later times by the maximum principle; the v-limit uses the
    initial absorption rate.
    """
    xi = np.linspace(0.0, linf_norm(s.v), PHI_SAMPLES)
    phi_max = float(np.max(motility.value_at(xi)))
    grid = s.grid
    diffusion = min(grid.h) ** 2 / (2.0 * grid.dim)
    _, v_limit = cfl_limits(s, motility)
    return config.dt_safety * min(diffusion / phi_max, v_limit)


def choose_dt(s: State, motility: RegularizedMotility, config: StepConfig) -> float:
    """Requested step: capped by cfl_cap * dt_cfl (IMEX) or by the explicit limit."""
    if config.scheme == "explicit":
        return min(config.dt, _explicit_dt(s, motility, config))
    if config.cfl_cap is None:
        return config.dt
    return min(config.dt, config.cfl_cap * dt_cfl(s, motility, config.dt_safety))


def run(config: "RunConfig") -> Trajectory:
    """
    Simulate one configuration.

    Args:
        config: Validated run configuration

    Returns:
        Trajectory with a DiagRecord per output time (T / cadence + 1 of them
        for a complete run); flagged incomplete if a step failed
    """
    grid = build_grid(config.grid.dim, config.grid.extents, config.grid.cells)
    motility = motility_for(config.motility.to_spec(), config.epsilon)
    u0, v0_eps = realize(config.initial, grid, config.epsilon)
    v0_linf = linf_norm(source_v0(config.initial.v0, grid))
    step_config = config.stepping
    diag = config.diagnostics

    state = State.initial(u0, v0_eps, config.epsilon)
    plan = plan_steps(config.horizon, config.output.cadence, choose_dt(state, motility, step_config))
    logger.info(
        f"Run on {grid.describe()}, {motility.base.describe()}, eps={config.epsilon:g}: "
        f"{step_config.scheme} dt={plan.dt:.6g}, {plan.n_steps} steps, {plan.n_out + 1} records"
    )

    meta = TrajectoryMeta(
        dim=grid.dim,
        extents=list(grid.extents),
        cells=list(grid.cells),
        measure=grid.measure,
        v0_linf=v0_linf,
        mass0=state.mass0,
        ubar0=state.ubar0,
        eps=float(config.epsilon),
        scheme=step_config.scheme,
        dt=plan.dt,
        n_steps=plan.n_steps,
        cadence=plan.cadence,
        stride=plan.stride,
        horizon=float(config.horizon),
        a=diag.a,
        b=diag.b,
        warnings=list(plan.warnings),
    )
    keep_states = config.output.snapshots
    records: List[DiagRecord] = [snapshot(state, motility, diag.a, diag.b)]
    states: List[State] = [state] if keep_states else []
    trajectory = Trajectory(records, states, meta, motility=motility, config=config)

    stepper = ImexStepper(grid, motility, step_config) if step_config.scheme == "imex" else None
    try:
        for i in range(1, plan.n_steps + 1):
            if stepper is not None:
                new = stepper.step(state, plan.dt)
            else:
                new = step_explicit(state, plan.dt, motility)
            new = replace(new, t=config.horizon * i / plan.n_steps)
            check_transition(state, new)
            state = new
            if i % plan.stride == 0:
                records.append(snapshot(state, motility, diag.a, diag.b))
                if keep_states:
                    states.append(state)
    except NumericalError as e:
        logger.error(f"Run aborted at t={state.t:.6g}: {e}")
        trajectory.complete = False
        trajectory.error = str(e)

    if stepper is not None:
        meta.max_residual = stepper.max_residual
    if trajectory.complete:
        logger.info(
            f"Run complete: mass={records[-1].mass:.12g}, vinf={records[-1].vinf:.6g}, "
            f"hm1={records[-1].hm1:.6g}"
        )
    return trajectory
