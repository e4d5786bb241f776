"""
Progress Tracker for zerolab experiments.

This module provides a progress tracking system with callbacks for
long-running Monte-Carlo and family computations.
"""

from enum import Enum
from typing import Optional, Callable
from rich.console import Console

# Progress goes to stderr so reports on stdout stay clean
console = Console(stderr=True)


class ExperimentPhase(Enum):
    """Experiment phases for progress tracking."""
    INITIALIZATION = "initialization"
    LOADING = "loading"
    SAMPLING = "sampling"
    REDUCTION = "reduction"
    REPORTING = "reporting"
    COMPLETION = "completion"
    ERROR = "error"


class ProgressTracker:
    """
    Progress tracker for experiments.

    Tracks the phase of an experiment, converts per-phase progress into an
    overall percentage and forwards every update to an optional callback.
    """

    def __init__(
        self,
        run_id: Optional[str] = None,
        callback: Optional[Callable[[str, str, str, int], None]] = None,
        verbose: bool = False,
    ):
        """
        Initialize progress tracker.

        Args:
            run_id: Identifier passed back to the callback
            callback: Called as callback(run_id, status, message, percentage)
            verbose: Print every update to the console
        """
        self.run_id = run_id
        self.callback = callback
        self.verbose = verbose
        self.phase = ExperimentPhase.INITIALIZATION
        self.percentage = 0
        self.total_tasks = 0
        self.completed_tasks = 0

        self.phase_weights = {
            ExperimentPhase.INITIALIZATION: 5,
            ExperimentPhase.LOADING: 10,
            ExperimentPhase.SAMPLING: 70,  # draws or per-member sums
            ExperimentPhase.REDUCTION: 10,
            ExperimentPhase.REPORTING: 5,
            ExperimentPhase.COMPLETION: 0,
            ExperimentPhase.ERROR: 0,
        }

        self.phase_base_percentages = {}
        cumulative = 0
        for phase, weight in self.phase_weights.items():
            self.phase_base_percentages[phase] = cumulative
            cumulative += weight

        self.update_progress(ExperimentPhase.INITIALIZATION, "Starting experiment...", 0)

    def update_progress(
        self,
        phase: ExperimentPhase,
        message: str,
        phase_progress: Optional[float] = None,
    ) -> int:
        """
        Update progress and send callback.

        Args:
            phase: Current experiment phase
            message: Progress message
            phase_progress: Progress within the current phase (0-100)

        Returns:
            Overall percentage
        """
        self.phase = phase

        base_percentage = self.phase_base_percentages[phase]
        if phase == ExperimentPhase.COMPLETION:
            percentage = 100
        elif phase_progress is not None:
            percentage = base_percentage + self.phase_weights[phase] * phase_progress / 100
        else:
            percentage = base_percentage

        percentage = max(0, min(100, round(percentage)))
        self.percentage = percentage

        if self.verbose:
            console.print(f"[blue]Progress update:[/] {phase.value} - {message} ({percentage}%)")

        if self.callback:
            status = "completed" if phase == ExperimentPhase.COMPLETION else \
                     "error" if phase == ExperimentPhase.ERROR else \
                     "processing"
            self.callback(self.run_id or "", status, message, percentage)

        return percentage

    def start_sampling(self, total_tasks: int, description: str):
        """
        Start the sampling phase.

        Args:
            total_tasks: Number of work items (draws or family members)
            description: What is being sampled
        """
        self.total_tasks = total_tasks
        self.completed_tasks = 0
        self.update_progress(ExperimentPhase.SAMPLING, f"{description} ({total_tasks} tasks)...", 0)

    def advance(self, completed: int = 1, message: str = ""):
        """
        Record completed work items in the sampling phase.

        Args:
            completed: Number of newly completed items
            message: Progress message
        """
        self.completed_tasks += completed
        if self.total_tasks > 0:
            phase_progress = self.completed_tasks / self.total_tasks * 100
        else:
            phase_progress = 50
        self.update_progress(
            ExperimentPhase.SAMPLING,
            message or f"{self.completed_tasks}/{self.total_tasks} done",
            phase_progress,
        )

    def complete(self, message: str = "Experiment complete"):
        """Mark the experiment as complete."""
        self.update_progress(ExperimentPhase.COMPLETION, message)

    def error(self, message: str):
        """Mark the experiment as failed."""
        self.update_progress(ExperimentPhase.ERROR, message)
