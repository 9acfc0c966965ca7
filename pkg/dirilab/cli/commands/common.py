"""
Options and helpers shared by the experiment commands.
"""

import functools
from pathlib import Path
from typing import Any, Callable, Optional

import click

from dirilab.cli.config_manager import ConfigManager
from dirilab.cli.models.config import ExperimentConfig
from dirilab.cli.utils.errors import ConfigurationError
from dirilab.cli.utils.fs import safe_write
from dirilab.cli.utils.logging import CLILogger
from dirilab.cli.utils.validation import validate_output_directory
from dirilab.src.engine.schedule import CantorSchedule, Schedule


def common_options(func: Callable) -> Callable:
    """--config, --output, --verbose and --quiet for every experiment command."""

    @click.option(
        "--config",
        "-c",
        "config_path",
        type=click.Path(dir_okay=False),
        default=None,
        help="JSON experiment configuration file",
    )
    @click.option(
        "--output",
        "-o",
        type=click.Path(file_okay=False),
        default=None,
        help="Output directory (overrides config; DIRILAB_OUTPUT_DIR wins over both)",
    )
    @click.option("--verbose", "-v", is_flag=True, help="Show debug and engine logging")
    @click.option("--quiet", "-q", is_flag=True, help="Only print results and warnings")
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        return func(*args, **kwargs)

    return wrapper


def load_experiment(
    config_path: Optional[str], output: Optional[str], **overrides: Any
) -> ExperimentConfig:
    """
    Load the configuration file (or defaults), apply flag overrides and validate.

    Raises:
        ConfigurationError: If the result is invalid
    """
    manager = ConfigManager()
    config = manager.load(Path(config_path) if config_path else None)
    if output:
        config.output_dir = output
    config.override(**overrides)
    config.validate()
    return config


def require_cantor(schedule: Schedule) -> CantorSchedule:
    if not isinstance(schedule, CantorSchedule):
        raise ConfigurationError(
            "this command needs a cantor schedule (kind 'cantor'); general schedules "
            "are supported by 'dirilab cantor' only"
        )
    return schedule


def write_output(
    config: ExperimentConfig, filename: str, content: str, logger: CLILogger
) -> Path:
    directory = validate_output_directory(config.to_lab_config().output_dir)
    path = safe_write(directory / filename, content)
    logger.debug(f"wrote {path}")
    return path
