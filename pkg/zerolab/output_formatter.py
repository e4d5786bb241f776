"""
Output Formatter for zerolab reports

This module provides the Report model produced by every subcommand and its
CSV and JSON serializations. Both are deterministic: columns keep their
declared order and floats are written with repr, so reruns with the same
configuration are byte-identical.
"""

import csv
import io
import json
import numbers
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from zerolab.logger import RichLogger
from zerolab.models import SCHEMA_VERSION, OutputFormat


class Report(BaseModel):
    """Tabular result of one subcommand."""
    model_config = ConfigDict(frozen=True)

    command: str = Field(description="Subcommand that produced the report")
    columns: List[str] = Field(description="Column names, in output order")
    rows: List[List[Any]] = Field(default_factory=list, description="One list per row, aligned with columns")
    payload: Dict[str, Any] = Field(default_factory=dict, description="Extra top-level JSON fields")

    def records(self) -> List[Dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _cell(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, Enum):
        return value.value
    return value


class OutputFormatter:
    """Serialize reports as CSV or JSON."""

    def __init__(self, logger: Optional[RichLogger] = None):
        self.logger = logger

    def format_csv(self, report: Report) -> str:
        if self.logger:
            self.logger.log_step("Output Formatting", "Formatting output as CSV")
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([_cell(v) for v in row])
        return buffer.getvalue()

    def format_json(self, report: Report) -> str:
        if self.logger:
            self.logger.log_step("Output Formatting", "Formatting output as JSON")
        document = {
            "schema_version": SCHEMA_VERSION,
            "command": report.command,
            "results": [{k: _json_value(v) for k, v in record.items()} for record in report.records()],
        }
        document.update({k: _json_value(v) for k, v in report.payload.items()})
        return json.dumps(document, indent=2) + "\n"

    def format(self, report: Report, output_format: OutputFormat) -> str:
        if OutputFormat(output_format) == OutputFormat.JSON:
            return self.format_json(report)
        return self.format_csv(report)


def _json_value(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float):
        return float(value)
    if isinstance(value, str):
        return value
    return str(value)
