"""
Chemotaxis Consumption Verifier - CLI and Persistence Module

Run configurations, run directories and the command line entry point
(src.cli_io.cli, not imported here because it depends on the experiments
package, which itself builds on run_config and series).
"""

from .run_config import ConfigError, RunConfig, config_from_dict, load_config, parse_config
from .series import SERIES_FORMAT, SeriesFormatError, read_series, write_series

__all__ = [
    "ConfigError",
    "RunConfig",
    "config_from_dict",
    "load_config",
    "parse_config",
    "SERIES_FORMAT",
    "SeriesFormatError",
    "read_series",
    "write_series",
]
