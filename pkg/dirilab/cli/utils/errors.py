"""
Error handling utilities and exit codes for the dirilab CLI.

Exit Codes:
  0: Success
  1: Findings reported or partial output (budget exceeded)
  2: Usage, configuration or precondition error
  3: Internal error
  130: Interrupted
"""

from typing import Optional

import click
from pydantic import ValidationError

from dirilab.src.engine.errors import LabError

# Exit codes
EXIT_SUCCESS = 0
EXIT_FINDINGS = 1
EXIT_USAGE_ERROR = 2
EXIT_INTERNAL_ERROR = 3
EXIT_INTERRUPTED = 130


class DirilabError(Exception):
    """Base exception for dirilab CLI errors."""

    def __init__(self, message: str, exit_code: int = EXIT_INTERNAL_ERROR):
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)


class ConfigurationError(DirilabError):
    """Malformed or invalid experiment configuration."""

    def __init__(self, message: str):
        super().__init__(message, EXIT_USAGE_ERROR)


class UsageError(DirilabError):
    """Bad command-line input (unparseable rational, empty sweep, ...)."""

    def __init__(self, message: str):
        super().__init__(message, EXIT_USAGE_ERROR)


class FindingsError(DirilabError):
    """Audits reported findings, or a command produced only partial output."""

    def __init__(self, message: str, count: Optional[int] = None):
        self.count = count
        super().__init__(message, EXIT_FINDINGS)


class FileSystemError(DirilabError):
    """Output files could not be written or read."""

    def __init__(self, message: str):
        super().__init__(message, EXIT_INTERNAL_ERROR)


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, DirilabError):
        return error.exit_code
    if isinstance(error, (LabError, ValidationError)):
        return EXIT_USAGE_ERROR
    if isinstance(error, KeyboardInterrupt):
        return EXIT_INTERRUPTED
    return EXIT_INTERNAL_ERROR


def handle_error(error: BaseException, verbose: bool = False) -> int:
    """
    Report an error on stderr and return the matching exit code.

    Args:
        error: The exception to handle
        verbose: Whether to show a traceback for unexpected errors

    Returns:
        Exit code for the error
    """
    code = exit_code_for(error)
    if isinstance(error, FindingsError):
        click.secho(f"\n⚠️  {error.message}", fg="yellow", err=True)
    elif isinstance(error, DirilabError):
        click.secho(f"\n✗ Error: {error.message}", fg="red", err=True)
    elif isinstance(error, LabError):
        click.secho(
            f"\n✗ Precondition violated ({type(error).__name__}): {error}", fg="red", err=True
        )
    elif isinstance(error, ValidationError):
        click.secho(f"\n✗ Invalid value: {error}", fg="red", err=True)
    elif isinstance(error, KeyboardInterrupt):
        click.secho("\n✗ Interrupted", fg="red", err=True)
    else:
        click.secho(f"\n✗ Unexpected error: {error}", fg="red", err=True)
        if verbose:
            import traceback

            click.echo(traceback.format_exc(), err=True)
    return code
