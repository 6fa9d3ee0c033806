"""
Chemotaxis Consumption Verifier - Initial Data

Builds regularized initial data (u0_eps, v0_eps) on a grid:

- u0_eps >= 0 carries exactly the intended mass; Dirac data are concentrated
  in the single cell containing the center (the harshest grid-representable
  approximation of a point mass).
- v0_eps = max(v0, eps * floor) > 0, which never exceeds ||v0||_inf + 1 for
  eps < 1 and floor <= 1.
"""

import logging
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field as PydanticField, model_validator

from ..geometry import Field, Grid, integrate, linf_norm, read_field, same_grid

logger = logging.getLogger(__name__)


class U0Spec(BaseModel):
    """Initial population density u0 (nonnegative, possibly measure-like)."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["constant", "bump", "dirac", "values", "file"]
    value: Optional[float] = PydanticField(default=None, description="constant level")
    center: Optional[Union[float, List[float]]] = PydanticField(default=None, description="bump/dirac center")
    width: Optional[float] = PydanticField(default=None, description="bump standard deviation")
    mass: Optional[float] = PydanticField(default=None, description="bump/dirac total mass")
    values: Optional[List[float]] = PydanticField(default=None, description="row-major cell values")
    file: Optional[str] = PydanticField(default=None, description="Field snapshot path")

    @model_validator(mode="after")
    def _check(self):
        required = {
            "constant": ["value"],
            "bump": ["center", "width", "mass"],
            "dirac": ["center", "mass"],
            "values": ["values"],
            "file": ["file"],
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"u0 kind '{self.kind}' requires {', '.join(missing)}")
        if self.value is not None and self.value < 0:
            raise ValueError(f"u0 value must be >= 0, got {self.value}")
        if self.mass is not None and self.mass < 0:
            raise ValueError(f"u0 mass must be >= 0, got {self.mass}")
        if self.width is not None and self.width <= 0:
            raise ValueError(f"u0 width must be > 0, got {self.width}")
        if self.values is not None and min(self.values, default=0.0) < 0:
            raise ValueError("u0 values must be >= 0")
        return self


class V0Spec(BaseModel):
    """Initial signal concentration v0 (nonnegative, bounded)."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["constant", "bump", "values", "file"]
    value: Optional[float] = PydanticField(default=None, description="constant level or bump peak")
    center: Optional[Union[float, List[float]]] = None
    width: Optional[float] = None
    values: Optional[List[float]] = None
    file: Optional[str] = None

    @model_validator(mode="after")
    def _check(self):
        required = {
            "constant": ["value"],
            "bump": ["value", "center", "width"],
            "values": ["values"],
            "file": ["file"],
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"v0 kind '{self.kind}' requires {', '.join(missing)}")
        if self.width is not None and self.width <= 0:
            raise ValueError(f"v0 width must be > 0, got {self.width}")
        if self.value is not None and (self.value < 0 or not np.isfinite(self.value)):
            raise ValueError(f"v0 value must be finite and >= 0, got {self.value}")
        if self.values is not None and min(self.values, default=0.0) < 0:
            raise ValueError("v0 values must be >= 0")
        return self


class InitialSpec(BaseModel):
    """Pair of initial data plus the positivity floor applied to v0."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    u0: U0Spec
    v0: V0Spec
    floor: float = PydanticField(default=1.0, gt=0.0, le=1.0, description="delta_floor in v0_eps >= eps*floor")


def _center_array(grid: Grid, center: Union[float, List[float]]) -> Tuple[float, ...]:
    if isinstance(center, (int, float)):
        center = [center]
    if len(center) != grid.dim:
        raise ValueError(f"center {center} has {len(center)} coordinates, grid is {grid.dim}D")
    return tuple(float(c) for c in center)


def _load_values(grid: Grid, values: Optional[List[float]], file: Optional[str], quantity: str) -> np.ndarray:
    if file is not None:
        loaded, _ = read_field(Path(file), quantity=quantity)
        if not same_grid(loaded.grid, grid):
            raise ValueError(f"{quantity}0 snapshot {file} lives on {loaded.grid.describe()}, run uses {grid.describe()}")
        data = np.array(loaded.values)
    else:
        data = np.asarray(values, dtype=float)
        if data.size != grid.size:
            raise ValueError(f"{quantity}0 has {data.size} values, grid has {grid.size} cells")
        data = data.reshape(grid.shape)
    if data.min() < 0:
        raise ValueError(f"{quantity}0 values must be >= 0")
    return data


def realize_u0(spec: U0Spec, grid: Grid) -> Field:
    """Grid representation of u0 with its intended mass."""
    if spec.kind == "constant":
        return Field.constant(grid, spec.value, quantity="u")

    if spec.kind == "dirac":
        center = _center_array(grid, spec.center)
        index = grid.locate(center)
        values = np.zeros(grid.shape)
        values[index] = spec.mass / grid.cell_volume
        logger.debug(f"Dirac mass {spec.mass:g} placed in cell {index}")
        return Field(grid, values, nonnegative=True, quantity="u")

    if spec.kind == "bump":
        profile = _gaussian(grid, _center_array(grid, spec.center), spec.width)
        total = profile.sum() * grid.cell_volume
        values = profile * (spec.mass / total) if total > 0 else profile
        return Field(grid, values, nonnegative=True, quantity="u")

    values = _load_values(grid, spec.values, spec.file, "u")
    return Field(grid, values, nonnegative=True, quantity="u")


def _gaussian(grid: Grid, center: Tuple[float, ...], width: float) -> np.ndarray:
    for c, L in zip(center, grid.extents):
        if not (0.0 <= c <= L):
            raise ValueError(f"bump center {center} lies outside the domain {grid.extents}")
    r2 = sum((x - c) ** 2 for x, c in zip(grid.mesh(), center))
    return np.exp(-r2 / (2.0 * width**2))


def source_v0(spec: V0Spec, grid: Grid) -> Field:
    """Unregularized v0 on the grid."""
    if spec.kind == "constant":
        return Field.constant(grid, spec.value, quantity="v")
    if spec.kind == "bump":
        # peak value at the center, independent of the grid
        profile = _gaussian(grid, _center_array(grid, spec.center), spec.width)
        return Field(grid, spec.value * profile, nonnegative=True, quantity="v")
    return Field(grid, _load_values(grid, spec.values, spec.file, "v"), nonnegative=True, quantity="v")


def realize(spec: InitialSpec, grid: Grid, eps: float) -> Tuple[Field, Field]:
    """
    Build admissible regularized initial data.

    Args:
        spec: Initial data specification
        grid: Target grid
        eps: Regularization parameter in [0, 1); 0 skips the positivity floor

    Returns:
        (u0_eps, v0_eps)
    """
    if not (0.0 <= eps < 1.0):
        raise ValueError(f"eps must lie in [0, 1), got {eps}")

    u0 = realize_u0(spec.u0, grid)
    v0 = source_v0(spec.v0, grid)
    v0_eps = v0.with_values(np.maximum(v0.values, eps * spec.floor), nonnegative=True)

    cap = linf_norm(v0) + 1.0
    if linf_norm(v0_eps) > cap:
        raise ValueError(f"v0_eps exceeds ||v0||_inf + 1 = {cap:g}")

    logger.info(
        f"Initial data on {grid.describe()}: mass={integrate(u0):.12g}, "
        f"||v0_eps||_inf={linf_norm(v0_eps):.6g}"
    )
    return u0, v0_eps
