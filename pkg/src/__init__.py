"""
Chemotaxis Consumption Verifier - Simulation and Verification Harness

Simulates the chemotaxis-consumption system with signal-dependent motility,

    u_t = Lap(u phi(v)),    v_t = Lap v - u v,

through its eps-regularized approximations, and audits every trajectory
against the dissipation bounds, energy functionals and decay behaviour the
system is known to obey.

Technologies:
- NumPy / SciPy for finite volumes, banded and Krylov solves, cosine transforms
- Pydantic for settings and run configuration
- pandas for diagnostic series
- Tenacity for linear solver retries
"""

__version__ = "1.0.0"
