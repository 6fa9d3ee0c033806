"""
Chemotaxis Consumption Verifier - Field Snapshot Files

Plain-text snapshot format:

    ksm-field v1 dim=<d> cells=<n1[,n2]> extents=<L1[,L2]> t=<time>
    <value>
    ...

one value per line in row-major order, 17 significant digits so that
doubles round-trip exactly.
"""

import logging
import re
from pathlib import Path
from typing import Tuple

import numpy as np

from .grid import Field, Grid, build_grid

logger = logging.getLogger(__name__)

FIELD_MAGIC = "ksm-field"
FIELD_VERSION = "v1"

_HEADER_RE = re.compile(
    r"^ksm-field (?P<version>\S+) dim=(?P<dim>\d+) cells=(?P<cells>[\d,]+) "
    r"extents=(?P<extents>[^\s]+) t=(?P<t>\S+)$"
)


class SnapshotFormatError(ValueError):
    """Malformed, truncated or wrong-version snapshot file."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_field(f: Field, t: float) -> str:
    """Render a Field snapshot as text."""
    grid = f.grid
    header = (
        f"{FIELD_MAGIC} {FIELD_VERSION} dim={grid.dim} "
        f"cells={','.join(str(n) for n in grid.cells)} "
        f"extents={','.join(_fmt(L) for L in grid.extents)} t={_fmt(t)}"
    )
    body = "\n".join(_fmt(x) for x in f.values.ravel(order="C"))
    return f"{header}\n{body}\n"


def parse_field(text: str, quantity: str = "", nonnegative: bool = False) -> Tuple[Field, float]:
    """
    Parse snapshot text.

    Returns:
        (Field, time stamp)

    Raises:
        SnapshotFormatError: on header, version or length mismatch
    """
    lines = text.strip("\n").split("\n")
    if not lines or not lines[0].startswith(FIELD_MAGIC):
        raise SnapshotFormatError("missing ksm-field header")
    match = _HEADER_RE.match(lines[0].strip())
    if not match:
        raise SnapshotFormatError(f"malformed header: {lines[0]!r}")
    if match["version"] != FIELD_VERSION:
        raise SnapshotFormatError(
            f"unsupported snapshot version {match['version']!r} (expected {FIELD_VERSION})"
        )
    try:
        dim = int(match["dim"])
        cells = [int(n) for n in match["cells"].split(",")]
        extents = [float(L) for L in match["extents"].split(",")]
        t = float(match["t"])
        grid = build_grid(dim, extents, cells)
    except ValueError as e:
        raise SnapshotFormatError(f"invalid header values: {e}") from e

    body = [line for line in lines[1:] if line.strip()]
    if len(body) != grid.size:
        raise SnapshotFormatError(
            f"truncated snapshot: expected {grid.size} values, found {len(body)}"
        )
    try:
        values = np.array([float(line) for line in body])
    except ValueError as e:
        raise SnapshotFormatError(f"non-numeric value in snapshot: {e}") from e
    return Field(grid, values.reshape(grid.shape), nonnegative=nonnegative, quantity=quantity), t


def write_field(path: Path, f: Field, t: float) -> None:
    """Write a Field snapshot file (parent directories are created)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_field(f, t))


def read_field(path: Path, quantity: str = "", nonnegative: bool = False) -> Tuple[Field, float]:
    """Read a Field snapshot file."""
    path = Path(path)
    if not path.exists():
        raise SnapshotFormatError(f"snapshot file not found: {path}")
    return parse_field(path.read_text(), quantity=quantity, nonnegative=nonnegative)


def same_grid(a: Grid, b: Grid) -> bool:
    """Grids agree in dimension, cells and extents."""
    return a.dim == b.dim and a.cells == b.cells and a.extents == b.extents
