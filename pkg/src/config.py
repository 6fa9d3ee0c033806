"""
Chemotaxis Consumption Verifier - Configuration Module

Centralized process-level configuration using Pydantic Settings.
Run-specific parameters (grid, motility, data, stepping) live in YAML run
configs parsed by src.cli_io.run_config; this module only carries defaults
and tolerances shared by every run.
"""

import logging
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support."""

    _env_path = str(Path(__file__).resolve().parent.parent / ".env")
    model_config = SettingsConfigDict(
        env_file=_env_path,
        env_file_encoding="utf-8",
        env_prefix="KSM_",
        case_sensitive=False,
        extra="ignore",
    )

    # -------------------------------------------------------------------------
    # Application
    # -------------------------------------------------------------------------
    app_name: str = Field(default="Chemotaxis Consumption Verifier", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")

    # -------------------------------------------------------------------------
    # Output
    # -------------------------------------------------------------------------
    runs_dir: str = Field(
        default="./runs",
        description="Default root for run and experiment output directories",
    )

    # -------------------------------------------------------------------------
    # Linear algebra
    # -------------------------------------------------------------------------
    solver_tolerance: float = Field(
        default=1e-12,
        description="Relative residual tolerance for Krylov solves (2D)",
    )
    max_linear_iterations: int = Field(
        default=500,
        description="Iteration budget of the first Krylov attempt",
    )

    # -------------------------------------------------------------------------
    # Audit tolerances
    # -------------------------------------------------------------------------
    mass_tolerance: float = Field(
        default=1e-10,
        description="Relative mass drift tolerated along a trajectory",
    )
    max_principle_slack: float = Field(
        default=1e-12,
        description="Slack for the step-to-step sup-norm monotonicity of v",
    )
    audit_slack: float = Field(
        default=1e-8,
        description="Relative quadrature slack for cumulative bounds",
    )

    # -------------------------------------------------------------------------
    # Experiments
    # -------------------------------------------------------------------------
    max_workers: int = Field(
        default=1,
        description="Worker processes for independent member runs (1 = sequential)",
    )

    # -------------------------------------------------------------------------
    # Logging
    # -------------------------------------------------------------------------
    log_level: str = Field(default="INFO")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    @property
    def runs_path(self) -> Path:
        """Get the runs directory as a Path."""
        return Path(self.runs_dir)


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.

    Returns:
        Settings: Application settings
    """
    return Settings()


# Create global settings instance
settings = get_settings()


# -------------------------------------------------------------------------
# Logging Configuration
# -------------------------------------------------------------------------
def setup_logging():
    """Configure application logging."""
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper()),
        format=settings.log_format,
    )


# Setup logging on import
setup_logging()
