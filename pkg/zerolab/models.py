"""
Shared Pydantic models and enums for zerolab.

This module defines the labels used across modules (groups, kernels,
statistics, output formats) and the RunConfig handed to the CLI runner.
"""

from enum import Enum
from typing import Any, Dict, Optional
from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = "1"


class GroupName(str, Enum):
    """Classical compact group families that can be sampled."""
    U = "U"
    SO_EVEN = "SO_even"
    SO_ODD = "SO_odd"
    USP = "USp"
    O = "O"


class KernelLabel(str, Enum):
    """Limiting one-level density kernels."""
    U = "U"
    SP = "Sp"
    SO_EVEN = "SOeven"
    SO_ODD = "SOodd"
    O = "O"


class Statistic(str, Enum):
    """Per-draw statistics for Monte-Carlo runs."""
    ONE_LEVEL = "one_level"
    PAIR_CORR = "pair_corr"


class AngleScaling(str, Enum):
    """
    How eigenangles are rescaled to unit mean spacing.

    MATRIX_SIZE multiplies by n/(2*pi). EFFECTIVE uses n-1 for the orthogonal
    groups and n+1 for USp, which removes the O(1/n) bias of finite matrices.
    """
    MATRIX_SIZE = "matrix-size"
    EFFECTIVE = "effective"


class LocalStatus(str, Enum):
    """Local behaviour of an automorphic representation at a prime."""
    UNRAMIFIED = "unramified"
    RAMIFIED = "ramified"


class ThetaMeasure(str, Enum):
    """Distribution of Satake angles for synthetic representations."""
    SATO_TATE = "sato-tate"
    UNIFORM = "uniform"


class OutputFormat(str, Enum):
    """Report serializations."""
    CSV = "csv"
    JSON = "json"


# group -> kernel it converges to
GROUP_KERNELS = {
    GroupName.U: KernelLabel.U,
    GroupName.SO_EVEN: KernelLabel.SO_EVEN,
    GroupName.SO_ODD: KernelLabel.SO_ODD,
    GroupName.USP: KernelLabel.SP,
    GroupName.O: KernelLabel.O,
}


class RunConfig(BaseModel):
    """Settings shared by every subcommand after merging defaults, config file and flags."""
    model_config = ConfigDict(frozen=True)

    command: str = Field(description="Subcommand name")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Master seed")
    threads: int = Field(default=4, ge=1, description="Worker threads")
    output_format: OutputFormat = Field(default=OutputFormat.CSV, description="Report format")
    out_path: Optional[str] = Field(default=None, description="Report path, stdout when unset")
    verbose: bool = Field(default=True, description="Print rich progress and tables to stderr")
    log_file: Optional[str] = Field(default=None, description="HTML log file")
    options: Dict[str, Any] = Field(default_factory=dict, description="Subcommand-specific settings")
