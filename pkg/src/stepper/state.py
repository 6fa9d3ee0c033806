"""
Chemotaxis Consumption Verifier - Stepper State Types

Time-stepping state, step configuration and numerical failure types.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field as PydanticField

from ..config import settings
from ..geometry import Field, integrate, linf_norm

logger = logging.getLogger(__name__)


class NumericalError(RuntimeError):
    """A step produced an invalid state (NaN, sign violation, lost mass)."""

    def __init__(self, message: str, t: Optional[float] = None):
        super().__init__(message)
        self.t = t


class LinearSolverError(NumericalError):
    """Krylov solve did not reach its tolerance."""

    def __init__(self, message: str, residual: float = float("nan"), t: Optional[float] = None):
        super().__init__(message, t=t)
        self.residual = residual


class CflViolation(NumericalError):
    """Explicit step requested above the stability limit."""


class StepConfig(BaseModel):
    """Time integration settings."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    scheme: Literal["imex", "explicit"] = "imex"
    dt: float = PydanticField(default=1e-3, gt=0.0, description="requested base step")
    dt_safety: float = PydanticField(default=0.9, gt=0.0, le=1.0, description="CFL safety factor")
    cfl_cap: Optional[float] = PydanticField(
        default=10.0, gt=0.0, description="IMEX step capped at cfl_cap * dt_cfl; null disables"
    )
    tolerance: float = PydanticField(default_factory=lambda: settings.solver_tolerance, gt=0.0)
    max_iterations: int = PydanticField(default_factory=lambda: settings.max_linear_iterations, gt=0)
    solver: Literal["auto", "banded", "krylov", "direct"] = "auto"


@dataclass(frozen=True)
class State:
    """
    Discrete solution at one instant.

    mass0 is the conserved integral of u0 and ubar0 = mass0 / |Omega| its mean.
    """
    t: float
    u: Field
    v: Field
    eps: float
    mass0: float
    ubar0: float

    @classmethod
    def initial(cls, u0: Field, v0: Field, eps: float) -> "State":
        mass0 = integrate(u0)
        return cls(t=0.0, u=u0, v=v0, eps=float(eps), mass0=mass0, ubar0=mass0 / u0.grid.measure)

    @property
    def grid(self):
        return self.u.grid

    def advance(self, dt: float, u_values: np.ndarray, v_values: np.ndarray) -> "State":
        """State at t + dt with new values (sign flags are checked by the guard, not here)."""
        return State(
            t=self.t + dt,
            u=Field(self.grid, u_values, quantity="u"),
            v=Field(self.grid, v_values, quantity="v"),
            eps=self.eps,
            mass0=self.mass0,
            ubar0=self.ubar0,
        )

    def absorption_rate(self) -> np.ndarray:
        """Cellwise u / (1 + eps u)."""
        u = self.u.values
        return u / (1.0 + self.eps * u)


def check_transition(prev: State, new: State) -> None:
    """
    Guard the structural invariants across one step.

    Raises:
        NumericalError: on non-finite values, negative densities, mass drift
            or a violated maximum principle for v
    """
    u, v = new.u.values, new.v.values
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise NumericalError(f"non-finite values at t={new.t:.6g}", t=new.t)
    if u.min() < 0.0 or v.min() < 0.0:
        raise NumericalError(
            f"negative density at t={new.t:.6g} (min u={u.min():.3e}, min v={v.min():.3e})", t=new.t
        )
    drift = abs(integrate(new.u) - new.mass0)
    if drift > settings.mass_tolerance * max(new.mass0, 1e-300):
        raise NumericalError(f"mass drift {drift:.3e} at t={new.t:.6g}", t=new.t)
    if linf_norm(new.v) > linf_norm(prev.v) + settings.max_principle_slack:
        raise NumericalError(
            f"max principle violated at t={new.t:.6g}: "
            f"{linf_norm(new.v):.17g} > {linf_norm(prev.v):.17g}",
            t=new.t,
        )
