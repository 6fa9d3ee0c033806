"""
Chemotaxis Consumption Verifier - Geometry Module

Spatial discretization of intervals and rectangles, Neumann operators and
quadrature.
"""

from .grid import Field, Grid, build_grid
from .operators import (
    face_gradients,
    grad_power_integral,
    inner,
    integrate,
    l2_norm_sq,
    laplacian_array,
    laplacian_l2_sq,
    laplacian_matrix,
    laplacian_matrix_1d,
    laplacian_neumann,
    linf_norm,
)
from .snapshot import (
    SnapshotFormatError,
    format_field,
    parse_field,
    read_field,
    same_grid,
    write_field,
)

__all__ = [
    "Field",
    "Grid",
    "build_grid",
    "face_gradients",
    "grad_power_integral",
    "inner",
    "integrate",
    "l2_norm_sq",
    "laplacian_array",
    "laplacian_l2_sq",
    "laplacian_matrix",
    "laplacian_matrix_1d",
    "laplacian_neumann",
    "linf_norm",
    "SnapshotFormatError",
    "format_field",
    "parse_field",
    "read_field",
    "same_grid",
    "write_field",
]
