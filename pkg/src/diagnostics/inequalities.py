"""
Chemotaxis Consumption Verifier - Inequality Scans

Each differential inequality checked along a trajectory has the form

    D(t) + R(t) / G <= G * P(t)      <=>      P G^2 - D' G - R >= 0

with D' the time derivative term (plus any nonnegative companion term that
is not divided by G), R >= 0 the damping term and P >= 0 the right-hand
side integrand. The smallest admissible G per sample is the positive root
of the quadratic; the reported constant is the maximum over interior
samples, with the time at which it binds.

Derivatives use centered differences at the output cadence. Each functional
is zeroed below its own round-off level, and the scan ends at the first
record where a right-hand side integrand has decayed to zero (t_cutoff).
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from .records import Trajectory

logger = logging.getLogger(__name__)

SIGN_DISAGREEMENT_LIMIT = 0.1
NOISE_FLOOR = 1e-14
# squared functionals below this fraction of |Omega| max(1, ubar0^2, ||v0||^2) are round-off
ROUNDOFF_FLOOR = 1e-20
# quadratic functionals below this fraction of their own peak are treated as decayed
RELATIVE_FLOOR = 1e-12


@dataclass
class ConstantEstimate:
    """Smallest constant validating one inequality over the sampled times."""
    name: str
    value: float
    t_binding: Optional[float]
    samples: int

    @property
    def finite(self) -> bool:
        return bool(np.isfinite(self.value))


@dataclass
class InequalityReport:
    """Empirical constants of the dissipation inequalities."""
    constants: Dict[str, ConstantEstimate]
    morrey: Optional[ConstantEstimate]
    low_confidence: bool
    reasons: List[str] = field(default_factory=list)
    records_per_unit_time: float = 0.0
    records_scanned: int = 0
    t_cutoff: Optional[float] = None

    def value(self, name: str) -> float:
        return self.constants[name].value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "constants": {k: asdict(v) for k, v in self.constants.items()},
            "morrey": asdict(self.morrey) if self.morrey else None,
            "low_confidence": self.low_confidence,
            "reasons": list(self.reasons),
            "records_per_unit_time": self.records_per_unit_time,
            "records_scanned": self.records_scanned,
            "t_cutoff": self.t_cutoff,
        }


def minimal_constant(P: np.ndarray, Q: np.ndarray, R: np.ndarray) -> np.ndarray:
    """
    Smallest G >= 0 with P G^2 - Q G - R >= 0, elementwise (inf if none).
    """
    P, Q, R = (np.asarray(x, dtype=float) for x in (P, Q, R))
    out = np.full(P.shape, np.inf)
    pos = P > 0
    disc = np.sqrt(np.maximum(Q[pos] ** 2 + 4.0 * P[pos] * R[pos], 0.0))
    out[pos] = np.maximum((Q[pos] + disc) / (2.0 * P[pos]), 0.0)

    flat = ~pos
    trivial = flat & (R <= 0)
    out[trivial] = 0.0
    damped = flat & (Q < 0) & (R > 0)
    out[damped] = R[damped] / (-Q[damped])
    return out


def _denoise(x: np.ndarray, floor: float) -> np.ndarray:
    return np.where(np.abs(x) <= floor, 0.0, x)


def _own_floor(x: np.ndarray, absolute: float, relative: float = RELATIVE_FLOOR) -> float:
    """Round-off level of one series: the larger of an absolute floor and a fraction of its peak."""
    peak = float(np.max(np.abs(x))) if x.size else 0.0
    return max(absolute, relative * peak)


def _decayed_at(series: np.ndarray) -> Optional[int]:
    """First index where a series that has been positive is back at zero."""
    positive = np.flatnonzero(series > 0)
    if positive.size == 0:
        return None
    start = int(positive[0])
    zeros = np.flatnonzero(series[start:] <= 0)
    return start + int(zeros[0]) if zeros.size else None


def _estimate(name: str, t: np.ndarray, gammas: np.ndarray) -> ConstantEstimate:
    if gammas.size == 0:
        return ConstantEstimate(name=name, value=0.0, t_binding=None, samples=0)
    i = int(np.argmax(gammas))
    return ConstantEstimate(name=name, value=float(gammas[i]), t_binding=float(t[i]), samples=int(gammas.size))


def _centered(series: np.ndarray, t: np.ndarray) -> np.ndarray:
    return (series[2:] - series[:-2]) / (t[2:] - t[:-2])


def _sign_disagreement(series: np.ndarray, t: np.ndarray) -> float:
    """Fraction of interior samples where centered and one-sided differences disagree in sign."""
    centered = _centered(series, t)
    forward = (series[2:] - series[1:-1]) / (t[2:] - t[1:-1])
    backward = (series[1:-1] - series[:-2]) / (t[1:-1] - t[:-2])
    scale = NOISE_FLOOR * max(1.0, float(np.max(np.abs(series))))
    significant = (np.abs(forward) > scale) & (np.abs(backward) > scale) & (np.abs(centered) > scale)
    clash = significant & ((np.sign(centered) != np.sign(forward)) | (np.sign(centered) != np.sign(backward)))
    return float(np.mean(clash)) if clash.size else 0.0


def inequality_scan(traj: Trajectory, min_records_per_unit_time: float = 10.0) -> InequalityReport:
    """
    Minimal empirical constants of the four dissipation inequalities.

    gradient:     d/dt grad2 + lap2/2 + grad4/G <= G udev2
    hminus:       d/dt hm1 + udev2/G <= G chi
    hminus_lq:    d/dt hm1 + udev2/G <= G ||grad v||^2_{L^4}
    energy:       d/dt F + (udev2 + grad4)/G <= G grad2

    plus the Morrey-type ratio (max v - min v) / ||grad v||_{L^4}.

    Args:
        traj: Trajectory with >= 3 records at a uniform cadence
        min_records_per_unit_time: Cadence below which the report is low-confidence
    """
    if len(traj) < 3:
        raise ValueError(f"inequality scan needs >= 3 records, got {len(traj)}")
    t = traj.times()
    steps = np.diff(t)
    if np.max(steps) - np.min(steps) > 1e-9 * np.max(steps):
        raise ValueError("inequality scan needs a uniform output cadence")

    reasons = []
    low_confidence = False
    per_unit = 1.0 / float(np.mean(steps))
    if per_unit < min_records_per_unit_time * (1.0 - 1e-9):
        low_confidence = True
        reasons.append(
            f"cadence gives {per_unit:.3g} records per unit time (< {min_records_per_unit_time:g})"
        )

    meta = traj.meta
    floor = ROUNDOFF_FLOOR * meta.measure * max(1.0, meta.ubar0**2, meta.v0_linf**2)
    extended = traj.has_extended()

    def col(name: str) -> np.ndarray:
        raw = traj.column(name)
        return _denoise(raw, _own_floor(raw, floor))

    udev2, grad2, hm1, F, lap2 = (col(name) for name in ("udev2", "grad2", "hm1", "F", "lap2"))
    # ||grad v||_{L^4}^2 is quadratic in v, like grad2
    lq_raw = np.sqrt(np.maximum(traj.column("grad4"), 0.0))
    lq = _denoise(lq_raw, _own_floor(lq_raw, floor / np.sqrt(meta.measure)))
    grad4 = lq**2
    chi = col("chi") if extended else None

    # right-hand sides of the inequalities; past the first one to decay the roots are noise
    watched = [udev2, grad2, lq] + ([chi] if extended else [])
    cuts = [i for i in (_decayed_at(s) for s in watched) if i is not None]
    n = len(t)
    t_cutoff = None
    if cuts:
        cut = min(cuts)
        t_cutoff = float(t[cut])
        n = max(cut, 3)
        reasons.append(f"functionals reach round-off at t={t_cutoff:.6g}; later records not scanned")
        logger.info(f"Inequality scan stops at t={t_cutoff:.6g} ({n} of {len(t)} records)")
        if cut < 3:
            low_confidence = True
            reasons.append(f"only {cut} records before round-off")

    ts = t[:n]
    udev2, grad2, hm1, F, lap2, lq, grad4 = (s[:n] for s in (udev2, grad2, hm1, F, lap2, lq, grad4))

    def rate(series: np.ndarray) -> np.ndarray:
        return _denoise(_centered(series, ts), _own_floor(series, floor) * per_unit)

    mid = slice(1, -1)
    t_mid = ts[mid]
    d_grad2, d_hm1, d_F = rate(grad2), rate(hm1), rate(F)

    for label, series in (("grad2", grad2), ("hm1", hm1), ("F", F)):
        fraction = _sign_disagreement(series, ts)
        if fraction > SIGN_DISAGREEMENT_LIMIT:
            low_confidence = True
            reasons.append(f"d/dt {label}: {fraction:.0%} of samples disagree in sign with one-sided differences")

    constants = {
        "gradient": _estimate("gradient", t_mid, minimal_constant(udev2[mid], d_grad2 + 0.5 * lap2[mid], grad4[mid])),
        "hminus_lq": _estimate("hminus_lq", t_mid, minimal_constant(lq[mid], d_hm1, udev2[mid])),
        "energy": _estimate("energy", t_mid, minimal_constant(grad2[mid], d_F, udev2[mid] + grad4[mid])),
    }
    morrey = None
    if extended:
        constants["hminus"] = _estimate("hminus", t_mid, minimal_constant(chi[:n][mid], d_hm1, udev2[mid]))
        vosc_raw = traj.column("vosc")
        vosc = _denoise(vosc_raw, _own_floor(vosc_raw, np.sqrt(floor / meta.measure), np.sqrt(RELATIVE_FLOOR)))[:n]
        l4 = np.sqrt(lq)
        ratios = np.where(l4 > 0, vosc / np.where(l4 > 0, l4, 1.0), np.where(vosc > 0, np.inf, 0.0))
        morrey = _estimate("morrey", ts, ratios)
    else:
        reasons.append("extended records missing: hminus constant and Morrey ratio skipped")

    report = InequalityReport(
        constants=constants,
        morrey=morrey,
        low_confidence=low_confidence,
        reasons=reasons,
        records_per_unit_time=per_unit,
        records_scanned=n,
        t_cutoff=t_cutoff,
    )
    for name, est in constants.items():
        logger.info(f"Inequality {name}: minimal constant {est.value:.6g} binding at t={est.t_binding}")
    if report.low_confidence:
        logger.warning(f"Inequality scan low-confidence: {'; '.join(reasons)}")
    return report


def odi_supersolution(tau: float, kappa: float, c7: float) -> Callable[[Any], Any]:
    """
    ybar(t) = c7 (t - tau/2)^(-1/(kappa-1)) + c7, defined for t > tau/2.
    """
    if tau <= 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if kappa <= 1:
        raise ValueError(f"kappa must be > 1, got {kappa}")
    if c7 <= 0:
        raise ValueError(f"c7 must be > 0, got {c7}")
    exponent = -1.0 / (kappa - 1.0)

    def ybar(t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr <= tau / 2.0):
            raise ValueError(f"ybar is defined for t > tau/2 = {tau / 2.0:g}")
        value = c7 * (arr - tau / 2.0) ** exponent + c7
        return float(value) if np.ndim(value) == 0 else value

    return ybar


@dataclass
class SupersolutionFit:
    """Smallest c7 with y <= ybar after tau and the implied sup bound c8."""
    tau: float
    kappa: float
    c7: float
    c8: float
    t_binding: Optional[float]
    sup_y: float
    samples: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def fit_supersolution(traj: Trajectory, tau: float, kappa: float = 2.0) -> SupersolutionFit:
    """
    Fit the supersolution profile to the sampled y-series for t > tau.

    c8 = c7 (tau/2)^(-1/(kappa-1)) + c7 bounds sup_{t > tau} y.
    """
    if tau <= 0 or kappa <= 1:
        raise ValueError(f"need tau > 0 and kappa > 1, got tau={tau}, kappa={kappa}")
    t = traj.times()
    y = traj.column("y")
    after = t > tau
    if not np.any(after):
        raise ValueError(f"trajectory has no samples after tau={tau:g}")
    exponent = -1.0 / (kappa - 1.0)
    profile = (t[after] - tau / 2.0) ** exponent + 1.0
    ratios = y[after] / profile
    i = int(np.argmax(ratios))
    c7 = max(float(ratios[i]), 0.0)
    c8 = c7 * (tau / 2.0) ** exponent + c7
    return SupersolutionFit(
        tau=tau,
        kappa=kappa,
        c7=c7,
        c8=c8,
        t_binding=float(t[after][i]),
        sup_y=float(np.max(y[after])),
        samples=int(after.sum()),
    )
