"""
Chemotaxis Consumption Verifier - Initial Data Module
"""

from .initial_data import InitialSpec, U0Spec, V0Spec, realize, realize_u0, source_v0

__all__ = ["InitialSpec", "U0Spec", "V0Spec", "realize", "realize_u0", "source_v0"]
