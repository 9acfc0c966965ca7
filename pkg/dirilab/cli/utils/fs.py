"""
Output directory handling and atomic writes for result files.

Result files are written through a temporary sibling and moved into place, so a
run interrupted mid-write never leaves a truncated CSV behind.
"""

import os
import tempfile
from pathlib import Path
from typing import Union

from dirilab.cli.utils.errors import FileSystemError

PathLike = Union[str, Path]


def _resolve(path: PathLike) -> Path:
    return Path(path).expanduser().resolve()


def ensure_directory(path: PathLike) -> Path:
    """Create an output directory (and its parents) and return its resolved path."""
    directory = _resolve(path)
    if directory.exists() and not directory.is_dir():
        raise FileSystemError(f"{directory} exists and is not a directory")
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except PermissionError:
        raise FileSystemError(f"Permission denied creating {directory}")
    except OSError as e:
        raise FileSystemError(f"Cannot create {directory}: {e}")
    return directory


def safe_write(path: PathLike, content: str, encoding: str = "utf-8") -> Path:
    """
    Atomically replace a result file with new content.

    Line endings are written untranslated so CSV and JSON outputs stay
    byte-identical across platforms.

    Raises:
        FileSystemError: If the file cannot be written
    """
    target = _resolve(path)
    directory = ensure_directory(target.parent)
    handle = tempfile.NamedTemporaryFile(
        "w",
        encoding=encoding,
        newline="",
        dir=directory,
        prefix=f".{target.name}.",
        suffix=".part",
        delete=False,
    )
    try:
        with handle:
            handle.write(content)
        os.replace(handle.name, target)
    except OSError as e:
        Path(handle.name).unlink(missing_ok=True)
        raise FileSystemError(f"Cannot write {target}: {e}")
    return target


def safe_read(path: PathLike, encoding: str = "utf-8") -> str:
    """Read a text file, turning OS errors into FileSystemError."""
    source = _resolve(path)
    try:
        return source.read_text(encoding=encoding)
    except FileNotFoundError:
        raise FileSystemError(f"File not found: {source}")
    except OSError as e:
        raise FileSystemError(f"Cannot read {source}: {e}")
