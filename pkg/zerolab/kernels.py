"""
Symmetry kernels and Plancherel pairings

This module provides the five limiting one-level densities W_G of the
classical groups, both as spatial densities and through their Fourier
transforms, the GUE pair-correlation functional and the pairings of all of
these against a FourierPair.
"""

import logging
from typing import Dict, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad

from zerolab.configuration_service import get_configuration
from zerolab.errors import InvalidInputError
from zerolab.models import KernelLabel
from zerolab.testfn import FourierPair, integrate_even

logger = logging.getLogger("zerolab.kernels")

INDISTINGUISHABILITY_TOL = 1e-12


class SymmetryKernel(BaseModel):
    """
    Limiting one-level density W_G.

    Spatially W = 1 + 2*fourier_window*sinc(2x) + spatial_atom*delta_0, so
    the Fourier side is fourier_atom*delta_0 + fourier_window*1_[-1,1]
    + fourier_constant.

    Attributes:
        label: Kernel label
        spatial_atom: Weight of delta_0 in W
        fourier_atom: Weight of delta_0 in the transform of W
        fourier_window: Coefficient of the indicator of [-1, 1]
        fourier_constant: Constant part of the transform of W
    """
    model_config = ConfigDict(frozen=True)

    label: KernelLabel
    spatial_atom: float = Field(description="Weight of delta_0 in W")
    fourier_atom: float = Field(default=1.0, description="Weight of delta_0 in the transform of W")
    fourier_window: float = Field(description="Coefficient of 1_[-1,1] in the transform of W")
    fourier_constant: float = Field(description="Constant part of the transform of W")

    def spatial_smooth(self, x):
        """Smooth part of W at x."""
        return 1.0 + 2.0 * self.fourier_window * np.sinc(2.0 * np.asarray(x, dtype=np.float64))


_KERNEL_DATA = {
    KernelLabel.U: (0.0, 0.0, 0.0),
    KernelLabel.SP: (0.0, -0.5, 0.0),
    KernelLabel.SO_EVEN: (0.0, 0.5, 0.0),
    KernelLabel.SO_ODD: (1.0, -0.5, 1.0),
    KernelLabel.O: (0.5, 0.0, 0.5),
}


def kernel(label: Union[str, KernelLabel]) -> SymmetryKernel:
    """
    Look up a symmetry kernel.

    Args:
        label: One of U, Sp, SOeven, SOodd, O

    Returns:
        SymmetryKernel with spatial and Fourier data
    """
    try:
        label = KernelLabel(label)
    except ValueError as e:
        raise InvalidInputError(
            f"unknown kernel {label!r}; expected one of {[k.value for k in KernelLabel]}"
        ) from e
    atom, window, constant = _KERNEL_DATA[label]
    return SymmetryKernel(label=label, spatial_atom=atom, fourier_window=window, fourier_constant=constant)


def window_integral(fp: FourierPair) -> float:
    """Integral of phi_hat over [-min(1, T), min(1, T)]."""
    m = min(1.0, fp.support_radius)
    limit = get_configuration().get_quadrature_config()["limit"]
    return quad(fp.eval_hat, -m, m, points=[0.0], limit=limit, epsabs=1e-14, epsrel=1e-14)[0]


def pair(k: SymmetryKernel, fp: FourierPair) -> float:
    """
    Pair a kernel with a test function on the Fourier side.

    Args:
        k: Symmetry kernel
        fp: Test function

    Returns:
        Integral of phi*W
    """
    value = k.fourier_atom * fp.eval_hat(0.0)
    if k.fourier_window:
        value += k.fourier_window * window_integral(fp)
    if k.fourier_constant:
        value += k.fourier_constant * fp.eval(0.0)
    return value


def spatial_pair(k: SymmetryKernel, fp: FourierPair) -> float:
    """Pair a kernel with a test function by quadrature of phi*W on the real line."""
    smooth = integrate_even(lambda x: fp.phi(x) * k.spatial_smooth(x))
    return smooth + k.spatial_atom * fp.eval(0.0)


class IndistinguishabilityReport(BaseModel):
    """Pairings of one test function against every kernel."""
    model_config = ConfigDict(frozen=True)

    family_tag: str
    support_radius: float
    pairings: Dict[str, float] = Field(description="Kernel label -> pairing")
    orthogonal_spread: float = Field(description="max - min over O, SOeven, SOodd")
    hypothesis_holds: bool = Field(description="support radius < 1")
    indistinguishable: bool = Field(description="orthogonal pairings agree to 1e-12")
    o_minus_sp: float = Field(description="pair(O) - pair(Sp)")


def indistinguishability_report(fp: FourierPair) -> IndistinguishabilityReport:
    """
    Compare the orthogonal pairings, which coincide when supp(phi_hat) lies in (-1, 1).

    For support radius >= 1 the report flags the violated hypothesis and
    records the spread instead of claiming equality.
    """
    pairings = {label.value: pair(kernel(label), fp) for label in KernelLabel}
    orthogonal = [pairings[KernelLabel.O.value], pairings[KernelLabel.SO_EVEN.value], pairings[KernelLabel.SO_ODD.value]]
    spread = max(orthogonal) - min(orthogonal)
    hypothesis = fp.support_radius < 1.0
    if hypothesis and spread > INDISTINGUISHABILITY_TOL:
        logger.warning("orthogonal pairings differ by %.3e for %s", spread, fp.family_tag)
    return IndistinguishabilityReport(
        family_tag=fp.family_tag,
        support_radius=fp.support_radius,
        pairings=pairings,
        orthogonal_spread=spread,
        hypothesis_holds=hypothesis,
        indistinguishable=hypothesis and spread <= INDISTINGUISHABILITY_TOL,
        o_minus_sp=pairings[KernelLabel.O.value] - pairings[KernelLabel.SP.value],
    )


class Interval(BaseModel):
    """Closed interval [a, b], used as an indicator test function."""
    model_config = ConfigDict(frozen=True)

    a: float
    b: float


def gue_density(x):
    """Pair-correlation density 1 - sinc(x)^2 of the sine kernel."""
    return 1.0 - np.sinc(np.asarray(x, dtype=np.float64)) ** 2


def gue_functional(target: Union[FourierPair, Interval]) -> float:
    """
    Integrate the GUE pair-correlation density against a test function or an interval.

    Args:
        target: FourierPair, or Interval standing for its indicator

    Returns:
        Integral of (1 - sinc^2) * phi
    """
    if isinstance(target, Interval):
        if target.b < target.a:
            raise InvalidInputError(f"empty interval [{target.a}, {target.b}]")
        settings = get_configuration().get_quadrature_config()
        points = [0.0] if target.a < 0.0 < target.b else None
        return quad(gue_density, target.a, target.b, points=points, limit=settings["limit"],
                    epsabs=settings["tol"], epsrel=settings["tol"])[0]
    return integrate_even(lambda x: gue_density(x) * target.phi(x))


def optimal_orthogonal_value(T: float) -> float:
    """Smallest achievable pair(O, fp)/phi(0) over admissible fp with support T <= 1, namely 1/T + 1/2."""
    if not T > 0:
        raise InvalidInputError(f"support must be positive, got {T}")
    return 1.0 / T + 0.5


def vanishing_order_bound(k: SymmetryKernel, fp: FourierPair) -> float:
    """Upper bound pair(k, fp)/phi(0) on the average order of vanishing at the centre."""
    return pair(k, fp) / fp.eval(0.0)
