"""
Test script for report formatting, the rich logger and progress tracking.
"""

import json

import numpy as np

from zerolab.logger import RichLogger
from zerolab.models import GroupName, OutputFormat
from zerolab.output_formatter import OutputFormatter, Report
from zerolab.progress_tracker import ExperimentPhase, ProgressTracker


def sample_report():
    return Report(
        command="demo",
        columns=["group", "n", "mean", "flag", "note"],
        rows=[[GroupName.USP, np.int64(6), np.float64(0.1), True, None],
              ["U", 5, 1.0 / 3.0, False, "a,b"]],
        payload={"test_fn": "fejer:0.8", "per_nu": [np.float64(0.5), 2]},
    )


def test_csv():
    text = OutputFormatter().format(sample_report(), OutputFormat.CSV)
    assert text == (
        "group,n,mean,flag,note\n"
        "USp,6,0.1,True,\n"
        'U,5,0.3333333333333333,False,"a,b"\n'
    )


def test_json():
    text = OutputFormatter().format_json(sample_report())
    assert text.endswith("}\n")
    document = json.loads(text)
    assert document["schema_version"] == "1"
    assert document["command"] == "demo"
    assert document["results"][0] == {"group": "USp", "n": 6, "mean": 0.1, "flag": True, "note": None}
    assert document["per_nu"] == [0.5, 2]
    assert document["test_fn"] == "fejer:0.8"


def test_formatting_is_deterministic():
    formatter = OutputFormatter()
    assert formatter.format(sample_report(), "json") == formatter.format(sample_report(), "json")


def test_formatter_logs_steps():
    rich_logger = RichLogger(verbose=True)
    OutputFormatter(rich_logger).format_csv(sample_report())
    assert "Output Formatting" in rich_logger.step_times


def test_records():
    assert sample_report().records()[1]["note"] == "a,b"


def test_progress_tracker_callbacks():
    updates = []
    tracker = ProgressTracker(run_id="run", callback=lambda *args: updates.append(args))
    tracker.start_sampling(4, "Sampling")
    tracker.advance(2)
    assert tracker.percentage == 5 + 10 + 35
    tracker.update_progress(ExperimentPhase.REDUCTION, "Reducing", 50)
    assert tracker.percentage == 90
    tracker.complete()
    assert updates[0] == ("run", "processing", "Starting experiment...", 0)
    assert updates[-1][1] == "completed"
    assert updates[-1][3] == 100


def test_progress_tracker_error():
    updates = []
    tracker = ProgressTracker(callback=lambda *args: updates.append(args))
    tracker.error("boom")
    assert updates[-1][:3] == ("", "error", "boom")
