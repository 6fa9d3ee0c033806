"""
Chemotaxis Consumption Verifier - Motility Functions

Signal-dependent motility phi and its regularized family
phi_eps(xi) = phi(xi) + eps * exp(-xi).

The additive term keeps phi_eps >= phi, moves phi_eps' by at most eps < 1
(so derivative bounds on compacts are uniform in eps) and converges to phi
uniformly, sup |phi_eps - phi| = eps attained at xi = 0.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

ArrayFn = Callable[[np.ndarray], np.ndarray]

CONSISTENCY_RANGE = (0.0, 10.0)
FD_STEP = 1e-5
FD_TOLERANCE = 1e-6


class MotilityKind(str, Enum):
    """Supported motility families."""
    POWER = "power"
    EXPONENTIAL = "exponential"
    CONSTANT = "constant"
    CUSTOM = "custom"


@dataclass(frozen=True)
class MotilitySpec:
    """
    Motility function phi with value and derivative evaluators.

    power:       phi(xi) = 1 / (xi + a)^alpha, a > 0, alpha > 0
    exponential: phi(xi) = exp(-beta xi), beta > 0
    constant:    phi(xi) = value > 0
    custom:      user-supplied phi and phi' (checked against central differences)
    """
    kind: MotilityKind
    a: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    value: float = 1.0
    custom_value: Optional[ArrayFn] = field(default=None, compare=False, repr=False)
    custom_derivative: Optional[ArrayFn] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        kind = MotilityKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind == MotilityKind.POWER:
            if self.a <= 0:
                raise ValueError(
                    f"degenerate motility: power kind requires a > 0, got a={self.a}"
                )
            if self.alpha <= 0:
                raise ValueError(f"power motility requires alpha > 0, got {self.alpha}")
        elif kind == MotilityKind.EXPONENTIAL:
            if self.beta <= 0:
                raise ValueError(f"exponential motility requires beta > 0, got {self.beta}")
        elif kind == MotilityKind.CONSTANT:
            if self.value <= 0:
                raise ValueError(f"degenerate motility: constant value must be > 0, got {self.value}")
        elif kind == MotilityKind.CUSTOM:
            if self.custom_value is None or self.custom_derivative is None:
                raise ValueError("custom motility needs both value and derivative evaluators")
            self._check_custom()

    @classmethod
    def power(cls, a: float, alpha: float) -> "MotilitySpec":
        return cls(MotilityKind.POWER, a=a, alpha=alpha)

    @classmethod
    def exponential(cls, beta: float) -> "MotilitySpec":
        return cls(MotilityKind.EXPONENTIAL, beta=beta)

    @classmethod
    def constant(cls, value: float) -> "MotilitySpec":
        return cls(MotilityKind.CONSTANT, value=value)

    @classmethod
    def custom(cls, value: ArrayFn, derivative: ArrayFn) -> "MotilitySpec":
        return cls(MotilityKind.CUSTOM, custom_value=value, custom_derivative=derivative)

    def _check_custom(self):
        """Positivity and derivative consistency on the reference range."""
        xi = np.linspace(*CONSISTENCY_RANGE, 1001)
        phi = np.asarray(self.custom_value(xi), dtype=float)
        if np.any(phi <= 0):
            raise ValueError("degenerate motility: custom phi must be positive on [0, 10]")
        inner = xi[(xi >= FD_STEP)]
        fd = (self.custom_value(inner + FD_STEP) - self.custom_value(inner - FD_STEP)) / (2 * FD_STEP)
        analytic = np.asarray(self.custom_derivative(inner), dtype=float)
        mismatch = np.max(np.abs(fd - analytic))
        if mismatch > FD_TOLERANCE:
            raise ValueError(
                f"custom motility derivative inconsistent with value (max mismatch {mismatch:.2e})"
            )

    def value_at(self, xi: np.ndarray) -> np.ndarray:
        """phi(xi), vectorized."""
        xi = np.asarray(xi, dtype=float)
        if self.kind == MotilityKind.POWER:
            return (xi + self.a) ** (-self.alpha)
        if self.kind == MotilityKind.EXPONENTIAL:
            return np.exp(-self.beta * xi)
        if self.kind == MotilityKind.CONSTANT:
            return np.full_like(xi, self.value)
        return np.asarray(self.custom_value(xi), dtype=float)

    def derivative_at(self, xi: np.ndarray) -> np.ndarray:
        """phi'(xi), vectorized."""
        xi = np.asarray(xi, dtype=float)
        if self.kind == MotilityKind.POWER:
            return -self.alpha * (xi + self.a) ** (-self.alpha - 1.0)
        if self.kind == MotilityKind.EXPONENTIAL:
            return -self.beta * np.exp(-self.beta * xi)
        if self.kind == MotilityKind.CONSTANT:
            return np.zeros_like(xi)
        return np.asarray(self.custom_derivative(xi), dtype=float)

    def describe(self) -> str:
        if self.kind == MotilityKind.POWER:
            return f"phi(xi) = 1/(xi+{self.a:g})^{self.alpha:g}"
        if self.kind == MotilityKind.EXPONENTIAL:
            return f"phi(xi) = exp(-{self.beta:g} xi)"
        if self.kind == MotilityKind.CONSTANT:
            return f"phi(xi) = {self.value:g}"
        return "phi custom"


@dataclass(frozen=True)
class RegularizedMotility:
    """
    phi_eps = phi + eps * exp(-xi).

    eps = 0 is allowed here and represents the unregularized limit problem;
    regularize() itself only hands out eps in (0, 1).
    """
    base: MotilitySpec
    eps: float

    def __post_init__(self):
        if not (0.0 <= self.eps < 1.0):
            raise ValueError(f"eps must lie in [0, 1), got {self.eps}")

    def value_at(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return self.base.value_at(xi) + self.eps * np.exp(-xi)

    def derivative_at(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return self.base.derivative_at(xi) - self.eps * np.exp(-xi)

    def sup_deviation(self, upper: float, samples: int = 2001) -> float:
        """sup over [0, upper] of |phi_eps - phi|."""
        xi = np.linspace(0.0, upper, samples)
        return float(np.max(np.abs(self.value_at(xi) - self.base.value_at(xi))))

    def derivative_bound(self, upper: float, samples: int = 2001) -> float:
        """sup over [0, upper] of |phi_eps'|."""
        xi = np.linspace(0.0, upper, samples)
        return float(np.max(np.abs(self.derivative_at(xi))))


def eval_phi(spec: MotilitySpec, xi: float) -> Tuple[float, float]:
    """
    Evaluate phi and phi' at a point.

    Args:
        spec: Motility specification
        xi: Signal level (>= 0)

    Returns:
        (phi(xi), phi'(xi))
    """
    if xi < 0:
        raise ValueError(f"xi must be >= 0, got {xi}")
    return float(spec.value_at(xi)), float(spec.derivative_at(xi))


def regularize(spec: MotilitySpec, eps: float) -> RegularizedMotility:
    """
    Build phi_eps = phi + eps * exp(-xi).

    Args:
        spec: Base motility
        eps: Regularization parameter in (0, 1)

    Returns:
        RegularizedMotility
    """
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return RegularizedMotility(base=spec, eps=float(eps))


def limit_motility(spec: MotilitySpec) -> RegularizedMotility:
    """Unregularized phi wrapped for eps = 0 runs."""
    return RegularizedMotility(base=spec, eps=0.0)


def motility_for(spec: MotilitySpec, eps: float) -> RegularizedMotility:
    """regularize() for eps > 0, the limit motility for eps = 0."""
    if eps == 0.0:
        logger.info("eps = 0: running the unregularized limit problem")
        return limit_motility(spec)
    return regularize(spec, eps)
