"""
Test script for the kernels module.

Covers the Fourier-side pairings of the five symmetry kernels, their
agreement with direct spatial quadrature, the orthogonal
indistinguishability for small support and the GUE functional.
"""

import numpy as np
import pytest

from zerolab.errors import InvalidInputError
from zerolab.kernels import (
    Interval,
    gue_functional,
    indistinguishability_report,
    kernel,
    optimal_orthogonal_value,
    pair,
    spatial_pair,
    vanishing_order_bound,
)
from zerolab.models import KernelLabel
from zerolab.testfn import fejer_pair


def test_kernel_lookup():
    assert kernel("SOodd").spatial_atom == 1.0
    assert kernel(KernelLabel.O).fourier_constant == 0.5
    with pytest.raises(InvalidInputError):
        kernel("SO")


@pytest.mark.parametrize("T", [0.3, 0.8, 1.0])
def test_fejer_pairings_closed_form(T):
    """For T <= 1: U -> 1, Sp -> 1 - T/2, and every orthogonal kernel -> 1 + T/2."""
    fp = fejer_pair(T)
    assert pair(kernel("U"), fp) == pytest.approx(1.0, abs=1e-12)
    assert pair(kernel("Sp"), fp) == pytest.approx(1.0 - T / 2, abs=1e-12)
    for label in ("SOeven", "SOodd", "O"):
        assert pair(kernel(label), fp) == pytest.approx(1.0 + T / 2, abs=1e-12)


def test_fejer_pairings_beyond_one():
    """For T = 1.5 the window integral is 2 - 1/T and the orthogonal kernels separate."""
    fp = fejer_pair(1.5)
    assert pair(kernel("SOeven"), fp) == pytest.approx(1.0 + 0.5 * (2.0 - 1.0 / 1.5), abs=1e-12)
    assert pair(kernel("SOodd"), fp) == pytest.approx(1.0 - 0.5 * (2.0 - 1.0 / 1.5) + 1.5, abs=1e-12)


def test_o_is_average_of_so_kernels():
    """W_O = (W_SOeven + W_SOodd)/2 as pairings, for random Fejér supports on both sides of 1."""
    rng = np.random.default_rng(2024)
    for T in rng.uniform(0.05, 3.0, 100):
        fp = fejer_pair(float(T))
        average = 0.5 * (pair(kernel("SOeven"), fp) + pair(kernel("SOodd"), fp))
        assert pair(kernel("O"), fp) == pytest.approx(average, abs=1e-12)


def test_o_pairing_is_phi_hat0_plus_half_phi0():
    rng = np.random.default_rng(7)
    for T in rng.uniform(0.05, 3.0, 20):
        fp = fejer_pair(float(T))
        assert pair(kernel("O"), fp) == pytest.approx(fp.eval_hat(0.0) + 0.5 * fp.eval(0.0), abs=1e-12)


@pytest.mark.parametrize("label", [k.value for k in KernelLabel])
def test_spatial_matches_fourier(label):
    fp = fejer_pair(0.8)
    assert spatial_pair(kernel(label), fp) == pytest.approx(pair(kernel(label), fp), abs=1e-5)


def test_indistinguishable_below_one():
    report = indistinguishability_report(fejer_pair(0.9))
    assert report.hypothesis_holds
    assert report.indistinguishable
    assert report.orthogonal_spread <= 1e-12
    assert report.o_minus_sp == pytest.approx(0.9, abs=1e-12)
    assert report.pairings["U"] == pytest.approx(1.0, abs=1e-12)


def test_indistinguishability_flags_large_support():
    report = indistinguishability_report(fejer_pair(1.5))
    assert not report.hypothesis_holds
    assert not report.indistinguishable
    assert report.orthogonal_spread == pytest.approx(1.5 - (2.0 - 1.0 / 1.5), abs=1e-12)


def test_gue_functional_fejer():
    """Integral of (1 - sinc^2) sinc^2 is 1 - 2/3."""
    assert gue_functional(fejer_pair(1.0)) == pytest.approx(1.0 / 3.0, abs=1e-5)


def test_gue_functional_interval():
    assert gue_functional(Interval(a=0.0, b=0.0)) == 0.0
    # the density vanishes to second order at the origin
    assert 0.0 < gue_functional(Interval(a=-0.05, b=0.05)) < 1e-3
    assert gue_functional(Interval(a=10.0, b=11.0)) == pytest.approx(1.0, abs=1e-3)
    with pytest.raises(InvalidInputError):
        gue_functional(Interval(a=1.0, b=0.0))


def test_optimal_orthogonal_value():
    assert optimal_orthogonal_value(2.0 / 3.0) == pytest.approx(2.0)
    assert vanishing_order_bound(kernel("O"), fejer_pair(0.8)) == pytest.approx(optimal_orthogonal_value(0.8))
    with pytest.raises(InvalidInputError):
        optimal_orthogonal_value(0.0)
