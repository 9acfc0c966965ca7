"""
Colored logging for the engine modules.

Engine records go to stderr so that tables printed on stdout stay clean.

Color Scheme:
    - DEBUG: Blue
    - INFO: Cyan
    - WARNING: Yellow
    - ERROR / CRITICAL: Red (bright for critical)

Usage:
    from dirilab.src.engine.logging_config import setup_logging

    setup_logging(level=logging.DEBUG)
"""

import logging
import sys
from typing import Optional, TextIO

from colorama import Fore, Style, init

init(autoreset=True)

ENGINE_LOGGER = "dirilab.src.engine"


class ColoredFormatter(logging.Formatter):
    """Level-colored lines with a timestamp and the short engine module name."""

    COLORS = {
        "DEBUG": Fore.BLUE,
        "INFO": Fore.CYAN,
        "WARNING": Fore.YELLOW,
        "ERROR": Fore.RED,
        "CRITICAL": Fore.RED + Style.BRIGHT,
    }

    COMPONENT_COLORS = {
        "timestamp": Fore.BLUE,
        "module": Fore.MAGENTA,
        "reset": Style.RESET_ALL,
    }

    def __init__(self, show_module: bool = True):
        super().__init__()
        self.show_module = show_module

    def format(self, record: logging.LogRecord) -> str:
        reset = self.COMPONENT_COLORS["reset"]
        level_color = self.COLORS.get(record.levelname, "")

        timestamp = self.formatTime(record, "%H:%M:%S")
        parts = [
            f"{self.COMPONENT_COLORS['timestamp']}[{timestamp}]{reset}",
            f"{level_color}{record.levelname:8}{reset}",
        ]
        if self.show_module:
            short = record.name.rsplit(".", 1)[-1]
            parts.append(f"{self.COMPONENT_COLORS['module']}{short:>14}{reset}")
        parts.append(f"{level_color}{record.getMessage()}{reset}")

        line = " ".join(parts)
        if record.exc_info:
            line += "\n" + self.formatException(record.exc_info)
        return line


def _console_handler(level: int, stream: Optional[TextIO]) -> logging.Handler:
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(ColoredFormatter())
    return handler


def setup_logging(level: int = logging.WARNING, stream: Optional[TextIO] = None) -> None:
    """
    Route the engine loggers through one colored stderr handler.

    Args:
        level: Logging level (default: logging.WARNING)
        stream: Target stream, stderr when omitted
    """
    setup_module_logging(ENGINE_LOGGER, level, stream)


def setup_module_logging(
    module_name: str, level: int = logging.INFO, stream: Optional[TextIO] = None
) -> logging.Logger:
    """
    Attach a colored handler to one logger and stop propagation to the root.

    Args:
        module_name: Dotted logger name
        level: Logging level (default: logging.INFO)
        stream: Target stream, stderr when omitted

    Returns:
        The configured logger
    """
    logger = logging.getLogger(module_name)
    logger.setLevel(level)
    logger.handlers.clear()
    logger.addHandler(_console_handler(level, stream))
    logger.propagate = False
    return logger
