"""
Data loaders for zerolab file formats.

This module provides loaders for:
- Coefficients files (Satake data of one representation)
- Zeros files (ordinates of one L-function)
- Family manifests (lists of coefficients files)
"""

from zerolab.data_loaders.coefficients_loader import CoefficientsLoader, dump_coefficients, parse_coefficients
from zerolab.data_loaders.zeros_loader import ZerosLoader, dump_zeros, parse_zeros
from zerolab.data_loaders.manifest_loader import ManifestLoader
from zerolab.data_loaders.data_loader_factory import DataLoaderFactory

__all__ = [
    "CoefficientsLoader",
    "ZerosLoader",
    "ManifestLoader",
    "DataLoaderFactory",
    "parse_coefficients",
    "dump_coefficients",
    "parse_zeros",
    "dump_zeros",
]
