"""
Zeros Loader for zerolab

This module provides the loader and writer for zeros files: a header line
`conductor <real>` followed by one real ordinate per line.
"""

import logging
import math
import os

from zerolab.errors import ParseError
from zerolab.lfun import ZerosRecord

logger = logging.getLogger("zerolab.data_loaders")

EXTENSIONS = (".zeros",)


def _parse_ordinate(path: str, number: int, line: str) -> float:
    tokens = line.split()
    if len(tokens) != 1:
        raise ParseError(path, number, f"expected one ordinate per line, got {line!r}")
    try:
        value = float(tokens[0])
    except ValueError:
        pass
    else:
        if not math.isfinite(value):
            raise ParseError(path, number, f"ordinate {tokens[0]!r} is not finite")
        return value
    try:
        value = complex(tokens[0])
    except ValueError:
        raise ParseError(path, number, f"ordinate {tokens[0]!r} is not a number") from None
    raise ParseError(path, number, f"complex ordinate {value} rejected, ordinates must be real")


def parse_zeros(text: str, path: str = "<string>") -> ZerosRecord:
    """
    Parse the contents of a zeros file.

    Raises:
        ParseError: malformed header or ordinate, with its line number
    """
    conductor = None
    ordinates = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if conductor is None:
            tokens = line.split()
            if len(tokens) != 2 or tokens[0] != "conductor":
                raise ParseError(path, number, f"expected 'conductor <real>', got {line!r}")
            try:
                conductor = float(tokens[1])
            except ValueError:
                raise ParseError(path, number, f"conductor {tokens[1]!r} is not a real number") from None
            if not 0 < conductor < math.inf:
                raise ParseError(path, number, f"conductor must be positive and finite, got {conductor}")
            continue
        ordinates.append(_parse_ordinate(path, number, line))
    if conductor is None:
        raise ParseError(path, 1, "empty zeros file")
    return ZerosRecord(conductor=conductor, ordinates=tuple(ordinates))


def dump_zeros(record: ZerosRecord) -> str:
    """Serialize a zeros record; parse_zeros reads it back bit-exactly."""
    lines = [f"conductor {record.conductor!r}"] + [repr(g) for g in record.ordinates]
    return "\n".join(lines) + "\n"


class ZerosLoader:
    """Loader for zeros files."""

    def __init__(self, file_path: str):
        """Initialize with file path."""
        self.file_path = file_path
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"File {file_path} does not exist")

    def load(self) -> ZerosRecord:
        """Load and return the zeros record stored in the file."""
        with open(self.file_path, "r", encoding="utf-8") as f:
            record = parse_zeros(f.read(), self.file_path)
        logger.info("loaded %d ordinates from %s", len(record.ordinates), self.file_path)
        return record

    @staticmethod
    def save(record: ZerosRecord, file_path: str) -> None:
        with open(file_path, "w", encoding="utf-8") as f:
            f.write(dump_zeros(record))

    @staticmethod
    def is_supported_file(file_path: str) -> bool:
        return os.path.splitext(file_path)[1].lower() in EXTENSIONS
