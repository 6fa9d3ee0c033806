"""
Chemotaxis Consumption Verifier - Motility Module

Motility functions phi and their eps-regularizations.
"""

from .motility import (
    MotilityKind,
    MotilitySpec,
    RegularizedMotility,
    eval_phi,
    limit_motility,
    motility_for,
    regularize,
)

__all__ = [
    "MotilityKind",
    "MotilitySpec",
    "RegularizedMotility",
    "eval_phi",
    "limit_motility",
    "motility_for",
    "regularize",
]
