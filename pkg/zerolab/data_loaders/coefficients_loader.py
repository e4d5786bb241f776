"""
Coefficients Loader for zerolab

This module provides the loader and writer for coefficients files: a header
line `conductor <real> root <+1|-1>` with optional `arith <q>` and
`horizon <H>` tokens, then one line per prime, `p theta` or `p ramified`.
Blank lines and lines starting with # are ignored.
"""

import logging
import math
import os
from typing import Dict, Tuple

from pydantic import ValidationError
from sympy import isprime

from zerolab.errors import ParseError
from zerolab.lfun import AutoRep, SatakeLocal, ramified, unramified

logger = logging.getLogger("zerolab.data_loaders")

EXTENSIONS = (".coeffs",)


def _data_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def _parse_header(path: str, number: int, line: str) -> Dict[str, str]:
    tokens = line.split()
    if len(tokens) % 2:
        raise ParseError(path, number, f"header needs key/value pairs, got {line!r}")
    header = dict(zip(tokens[::2], tokens[1::2]))
    unknown = set(header) - {"conductor", "root", "arith", "horizon"}
    if unknown:
        raise ParseError(path, number, f"unknown header keys {sorted(unknown)}")
    for key in ("conductor", "root"):
        if key not in header:
            raise ParseError(path, number, f"header is missing {key!r}")
    return header


def _parse_local(path: str, number: int, line: str) -> SatakeLocal:
    tokens = line.split()
    if len(tokens) != 2:
        raise ParseError(path, number, f"expected 'p theta' or 'p ramified', got {line!r}")
    try:
        p = int(tokens[0])
    except ValueError:
        raise ParseError(path, number, f"prime {tokens[0]!r} is not an integer") from None
    if not isprime(p):
        raise ParseError(path, number, f"{p} is not prime")
    if tokens[1] == "ramified":
        return ramified(p)
    try:
        theta = float(tokens[1])
    except ValueError:
        raise ParseError(path, number, f"Satake angle {tokens[1]!r} is not a real number") from None
    if not 0.0 <= theta <= math.pi:
        raise ParseError(path, number, f"Satake angle {theta} outside [0, pi]")
    return unramified(p, theta)


def parse_coefficients(text: str, path: str = "<string>") -> AutoRep:
    """
    Parse the contents of a coefficients file.

    Without an `arith` token the arithmetic conductor is the product of the
    ramified primes; without `horizon` it is the largest listed prime.

    Raises:
        ParseError: malformed line, with its line number
    """
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError(path, 1, "empty coefficients file")
    header_line, header_text = lines[0]
    header = _parse_header(path, header_line, header_text)

    locals_: Dict[int, SatakeLocal] = {}
    last_line = header_line
    for number, line in lines[1:]:
        local = _parse_local(path, number, line)
        if local.p in locals_:
            raise ParseError(path, number, f"prime {local.p} listed twice")
        locals_[local.p] = local
        last_line = number

    try:
        conductor = float(header["conductor"])
        root = int(header["root"])
        if "arith" in header:
            arith = int(header["arith"])
        else:
            arith = math.prod(p for p, local in locals_.items() if local.ramified)
        horizon = int(header["horizon"]) if "horizon" in header else max(locals_, default=1)
    except ValueError as e:
        raise ParseError(path, header_line, f"bad header value: {e}") from None

    try:
        return AutoRep(
            conductor=conductor,
            arithmetic_conductor=arith,
            root_number=root,
            horizon=horizon,
            locals=locals_,
        )
    except ValidationError as e:
        first = e.errors()[0]
        raise ParseError(path, last_line, f"inconsistent representation: {first['msg']}") from None


def dump_coefficients(rep: AutoRep) -> str:
    """Serialize a representation; parse_coefficients reads it back bit-exactly."""
    lines = [
        f"conductor {rep.conductor!r} root {rep.root_number:+d} "
        f"arith {rep.arithmetic_conductor} horizon {rep.horizon}"
    ]
    for p in sorted(rep.locals):
        local = rep.locals[p]
        lines.append(f"{p} ramified" if local.ramified else f"{p} {local.theta!r}")
    return "\n".join(lines) + "\n"


class CoefficientsLoader:
    """Loader for coefficients files."""

    def __init__(self, file_path: str):
        """Initialize with file path."""
        self.file_path = file_path
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"File {file_path} does not exist")

    def load(self) -> AutoRep:
        """Load and return the representation stored in the file."""
        with open(self.file_path, "r", encoding="utf-8") as f:
            rep = parse_coefficients(f.read(), self.file_path)
        logger.info("loaded %d locals from %s", len(rep.locals), self.file_path)
        return rep

    @staticmethod
    def save(rep: AutoRep, file_path: str) -> None:
        with open(file_path, "w", encoding="utf-8") as f:
            f.write(dump_coefficients(rep))

    @staticmethod
    def is_supported_file(file_path: str) -> bool:
        return os.path.splitext(file_path)[1].lower() in EXTENSIONS
