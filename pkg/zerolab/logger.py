"""
Rich Console Logger for zerolab runs

This module provides a rich console logger for experiment runs and the
standard-library logging setup shared by all zerolab modules.
"""

import logging
import time
from typing import Dict, Any, List, Optional, Sequence
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table
from rich import box


def setup_logging(level: str = "WARNING", console: Optional[Console] = None) -> None:
    """
    Route the "zerolab" logger hierarchy through a RichHandler.

    Args:
        level: Logging level name
        console: Console to log to (stderr by default)
    """
    handler = RichHandler(console=console or Console(stderr=True), rich_tracebacks=True)
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    root = logging.getLogger("zerolab")
    root.handlers = [handler]
    root.setLevel(level.upper())
    root.propagate = False


class RichLogger:
    """Rich console logger for experiment runs."""

    def __init__(self, verbose: bool = True, log_to_file: Optional[str] = None):
        """
        Initialize rich console logger.

        Args:
            verbose: Whether to log verbose output
            log_to_file: Path to an HTML log file (optional)
        """
        self.verbose = verbose
        self.console = Console(stderr=True, record=log_to_file is not None)
        self.log_to_file = log_to_file
        self.start_time = time.time()
        self.step_times: Dict[str, float] = {}

    def start_run(self, command: str, settings: Dict[str, Any]) -> None:
        """
        Log the start of a run.

        Args:
            command: Subcommand name
            settings: Effective settings after merging defaults, config file and flags
        """
        self.start_time = time.time()

        if not self.verbose:
            return

        table = Table(title="Run Configuration", box=box.ROUNDED)
        table.add_column("Setting", style="cyan")
        table.add_column("Value", style="green")

        for key, value in settings.items():
            table.add_row(key.replace("_", " ").title(), str(value))

        self.console.print(Panel(table, title=f"zerolab {command}", subtitle="Initializing..."))

    def log_step(self, step_name: str, message: str, data: Optional[Dict[str, Any]] = None) -> None:
        """
        Log a run step.

        Args:
            step_name: Step name
            message: Step message
            data: Step data (optional)
        """
        if not self.verbose:
            return

        self.step_times[step_name] = time.time()
        elapsed = self.step_times[step_name] - self.start_time
        self.console.print(f"[bold cyan]{step_name}[/bold cyan] [dim]+{elapsed:.2f}s[/dim] {message}")

        if data:
            details = Table(box=box.SIMPLE, show_header=False)
            details.add_column(style="cyan")
            details.add_column(style="green")
            for key, value in data.items():
                details.add_row(key, str(value))
            self.console.print(details)

    def log_results(self, title: str, columns: Sequence[str], rows: List[Sequence[Any]]) -> None:
        """
        Log a results table.

        Args:
            title: Table title
            columns: Column names
            rows: Table rows
        """
        if not self.verbose:
            return

        table = Table(title=title, box=box.ROUNDED)
        for column in columns:
            table.add_column(column, style="cyan" if column == columns[0] else "green")
        for row in rows:
            table.add_row(*[f"{v:.6g}" if isinstance(v, float) else str(v) for v in row])

        elapsed = time.time() - self.start_time
        self.console.print(Panel(table, title="Results", subtitle=f"{elapsed:.2f} seconds", border_style="green"))

    def log_error(self, error_message: str, error_details: Optional[str] = None) -> None:
        """
        Log error.

        Args:
            error_message: Error message
            error_details: Error details (optional)
        """
        body = f"[bold red]{error_message}[/bold red]"
        if error_details:
            body += f"\n\n{error_details}"
        self.console.print(Panel(body, title="zerolab error", border_style="red"))

    def save_log(self) -> None:
        """Save log to file."""
        if self.log_to_file:
            self.console.save_html(self.log_to_file)
