# src/cli/__init__.py
from src.cli.schema import ConfigFile, ParsedConfig, RunConfig, load_config, parse_config
from src.cli.sampling import halton, sample_points
from src.cli.report import Check, Report
from src.cli.commands import COMMANDS, run_guarded

__all__ = [
    "ConfigFile",
    "ParsedConfig",
    "RunConfig",
    "load_config",
    "parse_config",
    "halton",
    "sample_points",
    "Check",
    "Report",
    "COMMANDS",
    "run_guarded",
]
