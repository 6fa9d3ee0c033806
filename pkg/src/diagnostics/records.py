"""
Chemotaxis Consumption Verifier - Diagnostic Records

Per-instant functionals of a State and the Trajectory container produced by
the runner and by read_series.
"""

import logging
from dataclasses import asdict, dataclass, field, fields
from typing import TYPE_CHECKING, Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..geometry import grad_power_integral, integrate, l2_norm_sq, laplacian_l2_sq, linf_norm
from ..motility import RegularizedMotility
from ..spectral import hminus_half_norm_sq

if TYPE_CHECKING:
    from ..stepper.state import State

logger = logging.getLogger(__name__)

DIAG_COLUMNS = ["t", "mass", "vinf", "grad2", "grad4", "lap2", "udev2", "uL2", "hm1", "y", "F", "absorb"]
EXT_COLUMNS = ["vmass", "v2", "absorb2", "chi", "vosc"]


@dataclass(frozen=True)
class DiagRecord:
    """
    Functionals of one State.

    The first twelve entries form diag.csv. The extended entries are optional
    (None when read from a run directory without diag_ext.csv); chi also
    needs the motility.
    """
    t: float
    mass: float
    vinf: float
    grad2: float
    grad4: float
    lap2: float
    udev2: float
    uL2: float
    hm1: float
    y: float
    F: float
    absorb: float
    vmass: Optional[float] = None
    v2: Optional[float] = None
    absorb2: Optional[float] = None
    chi: Optional[float] = None
    vosc: Optional[float] = None

    def core(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in DIAG_COLUMNS}

    def extended(self) -> Dict[str, Optional[float]]:
        return {name: getattr(self, name) for name in EXT_COLUMNS}

    @property
    def has_extended(self) -> bool:
        return all(getattr(self, name) is not None for name in EXT_COLUMNS)


def snapshot(
    s: "State",
    motility: Optional[RegularizedMotility] = None,
    a: float = 1.0,
    b: float = 1.0,
) -> DiagRecord:
    """
    Evaluate every per-instant functional of a State.

    Args:
        s: State to evaluate
        motility: phi_eps of the run, needed only for chi
        a: Weight of grad2 in y
        b: Weight of grad2 in F

    Returns:
        DiagRecord at s.t
    """
    u, v = s.u, s.v
    cell = s.grid.cell_volume
    uv = np.asarray(u.values)
    vv = np.asarray(v.values)
    rate = s.absorption_rate()

    grad2 = grad_power_integral(v, 2)
    udev2 = float(np.sum((uv - s.ubar0) ** 2) * cell)
    hm1 = hminus_half_norm_sq(u, s.ubar0)

    chi = None
    if motility is not None:
        flux = uv * motility.value_at(vv)
        chi = float(np.sum((s.ubar0 * motility.value_at(vv) - flux.mean()) ** 2) * cell)

    return DiagRecord(
        t=float(s.t),
        mass=integrate(u),
        vinf=linf_norm(v),
        grad2=grad2,
        grad4=grad_power_integral(v, 4),
        lap2=laplacian_l2_sq(v),
        udev2=udev2,
        uL2=l2_norm_sq(u),
        hm1=hm1,
        y=hm1 + a * grad2,
        F=hm1 + b * grad2,
        absorb=float(np.sum(rate * vv) * cell),
        vmass=integrate(v),
        v2=l2_norm_sq(v),
        absorb2=float(np.sum(rate * vv**2) * cell),
        chi=chi,
        vosc=float(vv.max() - vv.min()),
    )


@dataclass
class TrajectoryMeta:
    """Run facts needed to audit a trajectory without re-simulating it."""
    dim: int
    extents: List[float]
    cells: List[int]
    measure: float
    v0_linf: float
    mass0: float
    ubar0: float
    eps: float
    scheme: str
    dt: float
    n_steps: int
    cadence: float
    stride: int
    horizon: float
    a: float = 1.0
    b: float = 1.0
    max_residual: float = 0.0
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrajectoryMeta":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass
class Trajectory:
    """
    Records at the output cadence plus the matching States.

    states is empty when snapshots were disabled. A run stopped by a
    numerical failure is returned with complete=False and the error text.
    """
    records: List[DiagRecord]
    states: List["State"]
    meta: TrajectoryMeta
    motility: Optional[RegularizedMotility] = None
    config: Optional[Any] = None
    complete: bool = True
    error: Optional[str] = None

    def __len__(self) -> int:
        return len(self.records)

    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records], dtype=float)

    def column(self, name: str) -> np.ndarray:
        """One functional over time; None entries become NaN."""
        values = [getattr(r, name) for r in self.records]
        return np.array([np.nan if x is None else x for x in values], dtype=float)

    def has_extended(self) -> bool:
        return bool(self.records) and all(r.has_extended for r in self.records)

    def frame(self) -> pd.DataFrame:
        """diag.csv content."""
        return pd.DataFrame([r.core() for r in self.records], columns=DIAG_COLUMNS)

    def extended_frame(self) -> pd.DataFrame:
        """diag_ext.csv content (t plus the extended columns)."""
        rows = [{"t": r.t, **r.extended()} for r in self.records]
        return pd.DataFrame(rows, columns=["t"] + EXT_COLUMNS)

    @property
    def final(self) -> DiagRecord:
        return self.records[-1]
