"""
Family Manifest Loader for zerolab

This module provides the loader for family manifests: one coefficients-file
path per line, relative paths resolved against the manifest's directory.
"""

import logging
import os
from typing import List

from pydantic import ValidationError

from zerolab.data_loaders.coefficients_loader import CoefficientsLoader
from zerolab.errors import ParseError
from zerolab.family import FamilyModel

logger = logging.getLogger("zerolab.data_loaders")

EXTENSIONS = (".family",)


class ManifestLoader:
    """Loader for family manifest files."""

    def __init__(self, file_path: str):
        """Initialize with file path."""
        self.file_path = file_path
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"File {file_path} does not exist")

    def member_paths(self) -> List[str]:
        """Coefficients paths listed in the manifest, resolved."""
        base = os.path.dirname(os.path.abspath(self.file_path))
        with open(self.file_path, "r", encoding="utf-8") as f:
            entries = [line.strip() for line in f]
        return [os.path.join(base, entry) for entry in entries if entry and not entry.startswith("#")]

    def load(self) -> FamilyModel:
        """Load every listed representation into a FamilyModel."""
        paths = self.member_paths()
        if not paths:
            raise ParseError(self.file_path, 1, "manifest lists no coefficients files")
        members = [CoefficientsLoader(path).load() for path in paths]
        label = os.path.splitext(os.path.basename(self.file_path))[0]
        try:
            family = FamilyModel(label=label, members=members)
        except ValidationError as e:
            raise ParseError(self.file_path, 1, e.errors()[0]["msg"]) from None
        logger.info("loaded family %s with %d members", label, len(members))
        return family

    @staticmethod
    def is_supported_file(file_path: str) -> bool:
        return os.path.splitext(file_path)[1].lower() in EXTENSIONS
