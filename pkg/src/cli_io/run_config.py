"""
Chemotaxis Consumption Verifier - Run Configuration

YAML run configurations validated into pydantic models. Unknown keys are
hard errors; every failing key is reported with its dotted path.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..geometry import Grid, build_grid
from ..initial_data import InitialSpec
from ..motility import MotilitySpec
from ..stepper.state import StepConfig

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid run configuration; `errors` holds one 'path: message' line per problem."""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.errors))


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridConfig(_Section):
    dim: int
    extents: List[float]
    cells: List[int]

    @model_validator(mode="after")
    def _check(self):
        self.build()
        return self

    def build(self) -> Grid:
        return build_grid(self.dim, self.extents, self.cells)


class MotilityConfig(_Section):
    kind: Literal["power", "exponential", "constant"]
    a: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    value: float = 1.0

    @model_validator(mode="after")
    def _check(self):
        self.to_spec()
        return self

    def to_spec(self) -> MotilitySpec:
        if self.kind == "power":
            return MotilitySpec.power(self.a, self.alpha)
        if self.kind == "exponential":
            return MotilitySpec.exponential(self.beta)
        return MotilitySpec.constant(self.value)


class OutputConfig(_Section):
    cadence: float = Field(default=0.1, gt=0.0)
    directory: Optional[str] = None
    snapshots: bool = True


class Thresholds(_Section):
    hm1: float = Field(default=1e-3, gt=0.0)
    vinf: float = Field(default=0.05, gt=0.0)
    F: float = Field(default=1e-3, gt=0.0)


class DiagnosticsConfig(_Section):
    a: float = Field(default=1.0, gt=0.0)
    b: float = Field(default=1.0, gt=0.0)
    t_ref: float = Field(default=1.0, ge=0.0)
    settle_horizon: Optional[float] = Field(default=None, ge=0.0)
    kappa: float = Field(default=2.0, gt=1.0)
    beta: float = Field(default=1.0, gt=0.5)
    tau: float = Field(default=0.1, gt=0.0)
    thresholds: Thresholds = Thresholds()
    min_records_per_unit_time: float = Field(default=10.0, gt=0.0)


class ExperimentsConfig(_Section):
    epsilons: List[float] = Field(default_factory=lambda: [0.1, 0.01, 0.001])
    grids: List[Union[int, List[int]]] = Field(default_factory=lambda: [64, 128, 256])
    tau: float = Field(default=0.1, gt=0.0)
    taus: List[float] = Field(default_factory=lambda: [0.05, 0.1, 0.2])
    levels: List[int] = Field(default_factory=lambda: [16, 32, 64])
    scale_dt: bool = True


class RunConfig(_Section):
    """One simulation plus the experiment and diagnostic settings built on it."""
    grid: GridConfig
    motility: MotilityConfig
    epsilon: float = Field(ge=0.0, lt=1.0)
    initial: InitialSpec
    stepping: StepConfig = Field(default_factory=StepConfig)
    horizon: float = Field(ge=0.0)
    output: OutputConfig = OutputConfig()
    diagnostics: DiagnosticsConfig = DiagnosticsConfig()
    experiments: ExperimentsConfig = ExperimentsConfig()

    def canonical(self) -> str:
        """Key-sorted compact JSON of the full configuration."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def content_hash(self) -> str:
        """Git-style blob SHA-1 of canonical()."""
        data = self.canonical().encode("utf-8")
        return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()

    def with_updates(self, **sections) -> "RunConfig":
        """Copy with whole sections or scalar keys replaced, re-validated."""
        data = self.model_dump()
        for key, value in sections.items():
            if isinstance(value, BaseModel):
                value = value.model_dump()
            data[key] = value
        return RunConfig.model_validate(data)


def _format_errors(exc: ValidationError) -> List[str]:
    lines = []
    for err in exc.errors():
        path = ".".join(str(part) for part in err["loc"]) or "<root>"
        message = err["msg"]
        if message.startswith("Value error, "):
            message = message[len("Value error, "):]
        lines.append(f"{path}: {message}")
    return lines


def config_from_dict(data: dict) -> RunConfig:
    """Validate an already-parsed mapping."""
    if not isinstance(data, dict):
        raise ConfigError([f"<root>: expected a mapping, got {type(data).__name__}"])
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_format_errors(e)) from None


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a YAML run configuration.

    Raises:
        ConfigError: on malformed YAML, unknown or missing keys, type
            mismatches and out-of-range values
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError([f"<root>: malformed YAML ({e})"]) from None
    return config_from_dict(data)


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read and parse a configuration file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError([f"<root>: configuration file not found: {path}"])
    config = parse_config(path.read_text(encoding="utf-8"))
    logger.info(f"Loaded configuration {path} ({config.content_hash()[:12]})")
    return config
