"""
Progress display for long sweeps using Rich. Rendered on stderr only.
"""

from typing import Optional

from rich.console import Console
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
)


class SweepProgress:
    """
    Single-bar tracker for parameter sweeps and level materialization.

    Inactive (every call a no-op) when disabled or when stderr is not a terminal,
    so piped runs and CliRunner tests see no progress output.
    """

    def __init__(
        self,
        total: int,
        description: str,
        enabled: bool = True,
        console: Optional[Console] = None,
    ):
        self.console = console or Console(stderr=True)
        self.active = enabled and self.console.is_terminal
        self.completed = 0
        self.progress: Optional[Progress] = None
        if not self.active:
            return
        self.progress = Progress(
            SpinnerColumn(),
            TextColumn("[bold blue]{task.description}"),
            BarColumn(),
            TaskProgressColumn(),
            TimeElapsedColumn(),
            console=self.console,
            transient=True,
        )
        self.task_id = self.progress.add_task(description, total=total)
        self.progress.start()

    def advance(self, message: Optional[str] = None):
        self.completed += 1
        if self.progress is None:
            return
        self.progress.advance(self.task_id)
        if message:
            self.progress.update(self.task_id, description=message)

    def stop(self):
        if self.progress is not None:
            self.progress.stop()
            self.progress = None

    def __enter__(self) -> "SweepProgress":
        return self

    def __exit__(self, *exc) -> None:
        self.stop()
