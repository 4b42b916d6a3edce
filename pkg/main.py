# main.py
import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from config import settings
from src.cli import COMMANDS, RunConfig, load_config, run_guarded
from src.errors import ConfigError
from static.constants import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, EXIT_OK, logger


class CommandLineParser(argparse.ArgumentParser):
    """Argument parser whose usage errors raise ConfigError instead of exiting."""

    def error(self, message: str):
        raise ConfigError("Invalid command line", [message])


def build_parser() -> argparse.ArgumentParser:
    parser = CommandLineParser(
        prog="hktbrane",
        description="Verify HKT brane superpositions, holonomy, calibrations and field equations",
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="Check to run")
    parser.add_argument("--config", "-c", required=True, help="JSON configuration file")
    parser.add_argument("--step", type=float, help="Finite-difference step")
    parser.add_argument("--seed", type=int, default=settings.SEED, help="Random seed")
    parser.add_argument("--samples", "-n", type=int, default=settings.SAMPLES, help="Number of sample points")
    parser.add_argument("--out", "-o", help="Report path (JSON); CSV sidecars are written next to it")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        logger.error(f"{e}")
        return EXIT_CONFIG_ERROR
    try:
        options = {k: v for k, v in vars(args).items() if v is not None}
        run = RunConfig(**options)
    except ValidationError as e:
        logger.error(f"Invalid options: {e}")
        return EXIT_CONFIG_ERROR
    try:
        parsed = load_config(run.config)
        report = run_guarded(COMMANDS[run.command], parsed, run)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR

    report.write(run.out)
    if report.passed:
        logger.info(f"{run.command}: all {len(report.checks)} checks passed")
        return EXIT_OK
    failed = [c.name for c in report.checks if not c.passed]
    logger.warning(f"{run.command}: {len(failed)} failed checks: {', '.join(failed)}")
    return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
