"""
Chemotaxis Consumption Verifier - Spectral Module

Cosine eigenbasis of the Neumann Laplacian, negative fractional powers and
the H^-1 type functional of u - ubar.
"""

from .cosine import (
    CosineCoeffs,
    discrete_eigenvalues,
    fractional_inverse,
    from_cosine,
    hminus_half_norm_sq,
    hminus_half_norm_sq_variational,
    interpolation_constant,
    interpolation_exponent,
    to_cosine,
)

__all__ = [
    "CosineCoeffs",
    "discrete_eigenvalues",
    "fractional_inverse",
    "from_cosine",
    "hminus_half_norm_sq",
    "hminus_half_norm_sq_variational",
    "interpolation_constant",
    "interpolation_exponent",
    "to_cosine",
]
