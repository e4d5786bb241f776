"""
Data loader factory for zerolab.

This module provides a factory for creating data loaders based on file extensions.
"""

import logging
import os
from typing import Optional, Union

from zerolab.data_loaders.coefficients_loader import CoefficientsLoader
from zerolab.data_loaders.manifest_loader import ManifestLoader
from zerolab.data_loaders.zeros_loader import ZerosLoader
from zerolab.errors import InvalidInputError
from zerolab.family import FamilyModel
from zerolab.lfun import AutoRep, ZerosRecord

logger = logging.getLogger("zerolab.data_loaders")

Loader = Union[CoefficientsLoader, ZerosLoader, ManifestLoader]
LOADERS = (CoefficientsLoader, ZerosLoader, ManifestLoader)


class DataLoaderFactory:
    """Factory for creating data loaders based on file extensions."""

    @staticmethod
    def get_loader_for_file(file_path: str) -> Optional[Loader]:
        """
        Get a data loader for the specified file.

        Args:
            file_path (str): Path to the file.

        Returns:
            Optional[Loader]: A loader for the file, or None if the extension is unknown.
        """
        for loader_cls in LOADERS:
            if loader_cls.is_supported_file(file_path):
                logger.debug("using %s for %s", loader_cls.__name__, file_path)
                return loader_cls(file_path)
        logger.warning("no loader available for file: %s", file_path)
        return None

    @staticmethod
    def load(file_path: str) -> Union[AutoRep, ZerosRecord, FamilyModel]:
        """
        Load the object stored in the specified file.

        Raises:
            InvalidInputError: If no loader is available for the file.
            FileNotFoundError: If the file does not exist.
        """
        loader = DataLoaderFactory.get_loader_for_file(file_path)
        if loader is None:
            _, ext = os.path.splitext(file_path)
            raise InvalidInputError(f"no loader available for {file_path!r} (extension {ext or 'none'})")
        return loader.load()

    @staticmethod
    def is_supported_file(file_path: str) -> bool:
        return any(loader_cls.is_supported_file(file_path) for loader_cls in LOADERS)
