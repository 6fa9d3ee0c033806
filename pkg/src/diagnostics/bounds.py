"""
Chemotaxis Consumption Verifier - Cumulative Bounds

Time-integrated dissipation against the closed-form bounds

    int_0^T int u v / (1 + eps u)  <=  |Omega| (||v0||_inf + 1)
    int_0^T int |grad v|^2         <=  1/2 |Omega| (||v0||_inf + 1)^2

together with audits of mass conservation, the sup-norm monotonicity of v,
the monotonicity of int v and the residuals of the L^p testing identities

    (1/p) d/dt int v^p + (p-1) int v^(p-2) |grad v|^2 + int u v^p / (1 + eps u) = 0

for p = 1, 2.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.integrate import trapezoid

from ..config import settings
from .records import Trajectory

logger = logging.getLogger(__name__)


@dataclass
class BoundReport:
    """Cumulative bounds and invariant audits of one trajectory."""
    horizon: float
    absorb_integral: float
    absorb_bound: float
    absorb_margin: float
    absorb_pass: bool
    grad2_integral: float
    grad2_bound: float
    grad2_margin: float
    grad2_pass: bool
    mass_drift: float
    mass_pass: bool
    vinf_increase: float
    vinf_monotone: bool
    vmass_monotone: Optional[bool] = None
    lp1_residual: Optional[float] = None
    lp2_residual: Optional[float] = None
    partial: bool = False
    skipped: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        checks = [self.absorb_pass, self.grad2_pass, self.mass_pass, self.vinf_monotone]
        if self.vmass_monotone is not None:
            checks.append(self.vmass_monotone)
        return all(checks)

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "passed": self.passed}


def _relative(value: float, scale: float) -> float:
    return abs(value) / scale if scale > 0 else abs(value)


def cumulative_bounds(traj: Trajectory) -> BoundReport:
    """
    Audit a trajectory against the explicit dissipation bounds.

    Args:
        traj: Trajectory with at least 2 records

    Returns:
        BoundReport; partial=True for an incomplete trajectory
    """
    if len(traj) < 2:
        raise ValueError(f"cumulative bounds need >= 2 records, got {len(traj)}")

    meta = traj.meta
    t = traj.times()
    slack = settings.audit_slack
    level = meta.v0_linf + 1.0

    absorb_integral = float(trapezoid(traj.column("absorb"), t))
    absorb_bound = meta.measure * level
    grad2_integral = float(trapezoid(traj.column("grad2"), t))
    grad2_bound = 0.5 * meta.measure * level**2

    mass = traj.column("mass")
    mass_drift = float(np.max(np.abs(mass - meta.mass0)))
    mass_pass = mass_drift <= settings.mass_tolerance * max(meta.mass0, 1e-300)

    vinf = traj.column("vinf")
    vinf_increase = float(np.max(np.diff(vinf))) if len(vinf) > 1 else 0.0
    vinf_monotone = vinf_increase <= settings.max_principle_slack

    skipped = []
    vmass_monotone = lp1 = lp2 = None
    if traj.has_extended():
        vmass = traj.column("vmass")
        vmass_monotone = bool(
            np.max(np.diff(vmass)) <= settings.max_principle_slack * max(1.0, vmass[0])
        )
        lp1 = _relative(vmass[-1] + absorb_integral - vmass[0], vmass[0])
        v2 = traj.column("v2")
        absorb2_integral = float(trapezoid(traj.column("absorb2"), t))
        lp2 = _relative(0.5 * v2[-1] + grad2_integral + absorb2_integral - 0.5 * v2[0], 0.5 * v2[0])
    else:
        skipped.append("extended records missing: int v monotonicity and L^p identities skipped")

    report = BoundReport(
        horizon=float(t[-1]),
        absorb_integral=absorb_integral,
        absorb_bound=absorb_bound,
        absorb_margin=absorb_bound - absorb_integral,
        absorb_pass=absorb_integral <= absorb_bound * (1.0 + slack),
        grad2_integral=grad2_integral,
        grad2_bound=grad2_bound,
        grad2_margin=grad2_bound - grad2_integral,
        grad2_pass=grad2_integral <= grad2_bound * (1.0 + slack),
        mass_drift=mass_drift,
        mass_pass=bool(mass_pass),
        vinf_increase=vinf_increase,
        vinf_monotone=bool(vinf_monotone),
        vmass_monotone=vmass_monotone,
        lp1_residual=lp1,
        lp2_residual=lp2,
        partial=not traj.complete,
        skipped=skipped,
    )
    if not report.passed:
        logger.warning(f"Bound audit failed: {report.to_dict()}")
    return report
