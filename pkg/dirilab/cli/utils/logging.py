"""
Console messages for the CLI. Everything goes to stderr so stdout carries only
tables and reports.
"""

import logging
import time
from typing import Any, Optional

import click

from dirilab.src.engine.logging_config import setup_logging


class CLILogger:
    """Status lines for experiment commands; quiet runs keep only warnings and errors."""

    def __init__(self, verbose: bool = False, quiet: bool = False):
        self.verbose = verbose
        self.quiet = quiet and not verbose
        self._started = time.perf_counter()

    def _emit(self, text: str, always: bool = False, **style: Any) -> None:
        if always or not self.quiet:
            click.secho(text, err=True, **style)

    def debug(self, message: str) -> None:
        if self.verbose:
            self._emit(f"[{time.strftime('%H:%M:%S')}] {message}", fg="cyan", dim=True)

    def info(self, message: str) -> None:
        self._emit(message)

    def success(self, message: str) -> None:
        self._emit(f"✓ {message}", fg="green")

    def warning(self, message: str) -> None:
        self._emit(f"⚠️  {message}", always=True, fg="yellow")

    def error(self, message: str) -> None:
        self._emit(f"✗ {message}", always=True, fg="red")

    def step(self, message: str, index: Optional[int] = None, total: Optional[int] = None):
        """Announce a stage, numbered as [index/total] when both are given."""
        marker = "→" if index is None or total is None else f"[{index}/{total}]"
        self._emit(f"{marker} {message}", fg="blue", bold=True)

    def elapsed_time(self) -> str:
        """Wall time since the logger was created, as "12.3s" or "2m 5s"."""
        minutes, seconds = divmod(time.perf_counter() - self._started, 60)
        if minutes >= 1:
            return f"{int(minutes)}m {int(seconds)}s"
        return f"{seconds:.1f}s"


def create_logger(verbose: bool = False, quiet: bool = False) -> CLILogger:
    """
    Create the command logger. Verbose runs also route engine records through
    the colored handler at DEBUG.
    """
    if verbose:
        setup_logging(level=logging.DEBUG)
    return CLILogger(verbose=verbose, quiet=quiet)
