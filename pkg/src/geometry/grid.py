"""
Chemotaxis Consumption Verifier - Grid and Field Types

Tensor-product cell-centered meshes on intervals [0, L] and rectangles
[0, L1] x [0, L2], and immutable scalar grid functions living on them.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

MIN_CELLS = 4
SUPPORTED_DIMS = (1, 2)


@dataclass(frozen=True)
class Grid:
    """
    Cell-centered tensor grid with homogeneous Neumann boundary metadata.

    Cell i along an axis of length L with N cells has center (i + 1/2) * L / N.
    Axis 0 is x, axis 1 (2D only) is y; Field values use the same axis order.
    """
    dim: int
    extents: Tuple[float, ...]
    cells: Tuple[int, ...]
    h: Tuple[float, ...] = field(init=False)
    measure: float = field(init=False)

    def __post_init__(self):
        if self.dim not in SUPPORTED_DIMS:
            raise ValueError(f"unsupported dimension: {self.dim}")
        if len(self.extents) != self.dim or len(self.cells) != self.dim:
            raise ValueError(
                f"expected {self.dim} extents and cell counts, "
                f"got {len(self.extents)} and {len(self.cells)}"
            )
        if any(not np.isfinite(L) or L <= 0 for L in self.extents):
            raise ValueError(f"extents must be positive, got {self.extents}")
        if any(int(n) != n or n < MIN_CELLS for n in self.cells):
            raise ValueError(f"cells must be integers >= {MIN_CELLS}, got {self.cells}")

        object.__setattr__(self, "extents", tuple(float(L) for L in self.extents))
        object.__setattr__(self, "cells", tuple(int(n) for n in self.cells))
        object.__setattr__(self, "h", tuple(L / n for L, n in zip(self.extents, self.cells)))
        object.__setattr__(self, "measure", float(np.prod(self.extents)))

    @property
    def shape(self) -> Tuple[int, ...]:
        """Array shape of a Field on this grid."""
        return self.cells

    @property
    def size(self) -> int:
        """Total number of cells."""
        return int(np.prod(self.cells))

    @property
    def cell_volume(self) -> float:
        """Length (1D) or area (2D) of one cell."""
        return float(np.prod(self.h))

    def centers(self, axis: int = 0) -> np.ndarray:
        """Cell-center coordinates along one axis."""
        n, h = self.cells[axis], self.h[axis]
        return (np.arange(n) + 0.5) * h

    def mesh(self) -> Tuple[np.ndarray, ...]:
        """Cell-center coordinate arrays broadcast to the Field shape."""
        return tuple(np.meshgrid(*(self.centers(a) for a in range(self.dim)), indexing="ij"))

    def locate(self, point: Sequence[float]) -> Tuple[int, ...]:
        """
        Index of the cell containing a point.

        Points on an interior face belong to the upper cell; the right boundary
        belongs to the last cell.

        Raises:
            ValueError: if the point lies outside the closed domain
        """
        if len(point) != self.dim:
            raise ValueError(f"point has {len(point)} coordinates, grid is {self.dim}D")
        index = []
        for x, L, n, h in zip(point, self.extents, self.cells, self.h):
            if not (0.0 <= x <= L):
                raise ValueError(f"point {tuple(point)} lies outside the domain {self.extents}")
            index.append(min(int(np.floor(x / h)), n - 1))
        return tuple(index)

    def describe(self) -> str:
        """Short description used in log messages."""
        cells = "x".join(str(n) for n in self.cells)
        return f"{self.dim}D grid {cells} on {self.extents} (|Omega|={self.measure:g})"


def build_grid(dim: int, extents: Sequence[float], cells: Sequence[int]) -> Grid:
    """
    Build a validated grid.

    Args:
        dim: Spatial dimension (1 or 2)
        extents: Domain length per axis
        cells: Cell count per axis (>= 4)

    Returns:
        Grid with h = extent / cells and measure = product of extents
    """
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension: {dim}")
    grid = Grid(dim=int(dim), extents=tuple(extents), cells=tuple(cells))
    logger.debug(f"Built {grid.describe()}")
    return grid


@dataclass(frozen=True, eq=False)
class Field:
    """
    Scalar grid function, one value per cell.

    Values are stored read-only; derive new Fields instead of mutating.
    `quantity` labels what the values measure (e.g. "u" mass density,
    "v" signal concentration) and is carried through snapshots.
    """
    grid: Grid
    values: np.ndarray
    nonnegative: bool = False
    quantity: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.shape != self.grid.shape:
            if values.size != self.grid.size:
                raise ValueError(
                    f"value count {values.size} does not match grid cell count {self.grid.size}"
                )
            values = values.reshape(self.grid.shape)
        if self.nonnegative and values.size and values.min() < 0.0:
            raise ValueError(
                f"field '{self.quantity or 'unnamed'}' flagged nonnegative has min {values.min():.3e}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray, nonnegative: bool | None = None) -> "Field":
        """New Field on the same grid with the same labels."""
        flag = self.nonnegative if nonnegative is None else nonnegative
        return Field(self.grid, values, nonnegative=flag, quantity=self.quantity)

    @classmethod
    def constant(cls, grid: Grid, value: float, quantity: str = "") -> "Field":
        """Spatially constant Field."""
        return cls(grid, np.full(grid.shape, float(value)), nonnegative=value >= 0, quantity=quantity)

    @classmethod
    def from_function(cls, grid: Grid, func, quantity: str = "", nonnegative: bool = False) -> "Field":
        """Sample func(*coordinates) at cell centers."""
        return cls(grid, func(*grid.mesh()), nonnegative=nonnegative, quantity=quantity)

    def mean(self) -> float:
        """Spatial mean (integral divided by |Omega|)."""
        return float(self.values.mean())
