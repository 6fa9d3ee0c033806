"""
Chemotaxis Consumption Verifier - Decay Metrics

Large-time homogenization: hm1 and F relative to their values at t_ref,
vinf relative to its initial value, first threshold crossings and the
empirical exponential rate of F, plus the tail integral of ||grad v||_{L^4}^4
over [t_ref, T], which stays bounded as T grows.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.integrate import trapezoid

from .records import Trajectory

logger = logging.getLogger(__name__)


@dataclass
class DecayReport:
    """Decay ratios, threshold crossings and the fitted rate of F."""
    horizon: float
    t_ref: float
    hm1_ratio: float
    vinf_ratio: float
    F_ratio: float
    hm1_crossing: Optional[float]
    vinf_crossing: Optional[float]
    F_crossing: Optional[float]
    F_rate: Optional[float]
    grad4_tail_integral: float
    settled: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _ratio(final: float, reference: float) -> float:
    """final / reference with 0/0 read as 0."""
    if reference == 0.0:
        return 0.0 if final == 0.0 else float("inf")
    return float(final / reference)


def _first_below(t: np.ndarray, series: np.ndarray, threshold: float) -> Optional[float]:
    below = np.nonzero(series < threshold)[0]
    return float(t[below[0]]) if below.size else None


def decay_metrics(
    traj: Trajectory,
    t_ref: float = 1.0,
    settle_horizon: Optional[float] = None,
    thresholds: Optional[Dict[str, float]] = None,
) -> DecayReport:
    """
    Decay summary of a trajectory.

    Args:
        traj: Trajectory
        t_ref: Reference time for hm1 and F (values interpolated at t_ref)
        settle_horizon: Horizon the run should reach; defaults to the run horizon
        thresholds: Crossing levels keyed by hm1, vinf, F
    """
    thresholds = thresholds or {}
    t = traj.times()
    horizon = float(t[-1])
    settle = traj.meta.horizon if settle_horizon is None else settle_horizon
    hm1, vinf, F = traj.column("hm1"), traj.column("vinf"), traj.column("F")
    ref = min(t_ref, horizon)

    rate = None
    window = (t >= ref) & (F > 0)
    if np.count_nonzero(window) >= 2 and t[window][-1] > t[window][0]:
        rate = float(np.polyfit(t[window], np.log(F[window]), 1)[0])

    grad4 = traj.column("grad4")
    tail = t > ref
    t_tail = np.concatenate(([ref], t[tail]))
    g_tail = np.concatenate(([np.interp(ref, t, grad4)], grad4[tail]))

    report = DecayReport(
        horizon=horizon,
        t_ref=ref,
        hm1_ratio=_ratio(hm1[-1], float(np.interp(ref, t, hm1))),
        vinf_ratio=_ratio(vinf[-1], vinf[0]),
        F_ratio=_ratio(F[-1], float(np.interp(ref, t, F))),
        hm1_crossing=_first_below(t, hm1, thresholds["hm1"]) if "hm1" in thresholds else None,
        vinf_crossing=_first_below(t, vinf, thresholds["vinf"]) if "vinf" in thresholds else None,
        F_crossing=_first_below(t, F, thresholds["F"]) if "F" in thresholds else None,
        F_rate=rate,
        grad4_tail_integral=float(trapezoid(g_tail, t_tail)),
        settled=bool(horizon >= settle * (1.0 - 1e-12)),
    )
    if not report.settled:
        logger.warning(f"Trajectory ends at t={horizon:g} before the settling horizon {settle:g}")
    return report
