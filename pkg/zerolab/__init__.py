"""
zerolab - Low-lying zeros laboratory

This package provides random matrix ensembles and their eigenangle
statistics, the symmetry kernels they converge to, Satake-parameter
arithmetic with an explicit-formula engine, and family-level statistics
for degree-2 L-functions.
"""

__version__ = "1.0.0"

from .errors import (
    HorizonError,
    InvalidInputError,
    NumericalError,
    ParseError,
    ResourceLimitError,
    SingularityError,
    ZerolabError,
)
from .testfn import FourierPair, fejer_pair, parse_test_fn
from .kernels import indistinguishability_report, kernel, pair
from .rmt import HaarDrawConfig, haar_sample
from .monte_carlo import monte_carlo
from .lfun import AutoRep, SatakeLocal, explicit_formula_density, synthetic_rep
from .family import averaged_density, nonvanishing_bounds, second_order_shift, sieve_new_from_old

__all__ = [
    "ZerolabError",
    "InvalidInputError",
    "HorizonError",
    "ParseError",
    "ResourceLimitError",
    "NumericalError",
    "SingularityError",
    "FourierPair",
    "fejer_pair",
    "parse_test_fn",
    "kernel",
    "pair",
    "indistinguishability_report",
    "HaarDrawConfig",
    "haar_sample",
    "monte_carlo",
    "SatakeLocal",
    "AutoRep",
    "explicit_formula_density",
    "synthetic_rep",
    "sieve_new_from_old",
    "averaged_density",
    "second_order_shift",
    "nonvanishing_bounds",
]
