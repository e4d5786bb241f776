"""
Test functions with compactly supported Fourier transforms

This module provides the FourierPair type, the Fejér family, parsing of
command-line test-function specs, numerical verification of a pair and the
line-integration helper shared with the kernels module.
"""

import logging
import math
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.integrate import quad

from zerolab.configuration_service import get_configuration
from zerolab.errors import InvalidInputError

logger = logging.getLogger("zerolab.testfn")

Support = Union[float, Fraction]


class FourierPair(BaseModel):
    """
    Even test function phi together with its Fourier transform phi_hat.

    phi_hat(y) = integral of phi(x) exp(-2 pi i x y) dx vanishes for
    |y| >= support_radius. Both callables accept numpy arrays.

    Attributes:
        phi: Vectorized phi
        phi_hat: Vectorized phi_hat
        support_radius: T such that supp(phi_hat) lies in [-T, T]
        family_tag: Human readable label, e.g. "fejer:0.8"
        support_fraction: Exact support when given as a rational
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    phi: Callable = Field(description="Vectorized test function")
    phi_hat: Callable = Field(description="Vectorized Fourier transform")
    support_radius: float = Field(gt=0, description="Support radius of phi_hat")
    family_tag: str = Field(default="custom", description="Label of the pair")
    support_fraction: Optional[Fraction] = Field(default=None, description="Exact support radius")

    def eval(self, x):
        """Evaluate phi; scalars in, float out."""
        values = self.phi(np.asarray(x, dtype=np.float64))
        return float(values) if np.ndim(values) == 0 else values

    def eval_hat(self, y):
        """Evaluate phi_hat; scalars in, float out."""
        values = self.phi_hat(np.asarray(y, dtype=np.float64))
        return float(values) if np.ndim(values) == 0 else values

    def hat_sup(self) -> float:
        """Maximum of |phi_hat| over its support, sampled on a fine grid."""
        grid = np.linspace(-self.support_radius, self.support_radius, 2001)
        return float(np.max(np.abs(self.eval_hat(grid))))


def parse_support(text: Union[str, float, Fraction]) -> Support:
    """
    Parse a support radius, keeping rationals such as "2/3" exact.

    Args:
        text: "a/b", a decimal string, or a number

    Returns:
        Fraction for "a/b" input, float otherwise
    """
    if isinstance(text, (Fraction, float, int)) and not isinstance(text, bool):
        value = text
    else:
        text = str(text).strip()
        try:
            value = Fraction(text) if "/" in text else float(text)
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInputError(f"cannot parse support radius {text!r}") from e
    if not value > 0 or not math.isfinite(value):
        raise InvalidInputError(f"support radius must be positive and finite, got {text}")
    return value


def fejer_pair(T: Support) -> FourierPair:
    """
    Fejér pair phi(x) = T sinc^2(T x), phi_hat(y) = max(0, 1 - |y|/T).

    Args:
        T: Support radius, positive; a Fraction is kept as the exact support

    Returns:
        FourierPair with phi(0) = T and phi_hat(0) = 1
    """
    T = parse_support(T)
    t = float(T)

    def phi(x):
        return t * np.sinc(t * x) ** 2

    def phi_hat(y):
        return np.maximum(0.0, 1.0 - np.abs(y) / t)

    return FourierPair(
        phi=phi,
        phi_hat=phi_hat,
        support_radius=t,
        family_tag=f"fejer:{T}",
        support_fraction=T if isinstance(T, Fraction) else None,
    )


def scaled(fp: FourierPair, factor: float) -> FourierPair:
    """Multiply a pair by a constant."""
    return FourierPair(
        phi=lambda x: factor * fp.phi(x),
        phi_hat=lambda y: factor * fp.phi_hat(y),
        support_radius=fp.support_radius,
        family_tag=f"{factor}*{fp.family_tag}",
        support_fraction=fp.support_fraction,
    )


def add_pairs(a: FourierPair, b: FourierPair) -> FourierPair:
    """Sum of two pairs; the support is the larger of the two."""
    return FourierPair(
        phi=lambda x: a.phi(x) + b.phi(x),
        phi_hat=lambda y: a.phi_hat(y) + b.phi_hat(y),
        support_radius=max(a.support_radius, b.support_radius),
        family_tag=f"{a.family_tag}+{b.family_tag}",
    )


def parse_test_fn(spec: str) -> FourierPair:
    """
    Build a pair from a "family:parameter" spec.

    Only the Fejér family is available: "fejer:0.8" or "fejer:2/3".
    """
    family, _, param = str(spec).partition(":")
    family = family.strip().lower()
    if family != "fejer" or not param:
        raise InvalidInputError(f"unknown test function {spec!r}; expected fejer:<T>")
    return fejer_pair(parse_support(param))


def integrate_even(func: Callable, horizon: Optional[float] = None, chunk: float = 1.0) -> float:
    """
    Integrate an even function over the real line.

    The interval [0, horizon] is covered by adaptive quadrature on chunks of
    width `chunk`; beyond it the integrand is treated as c/x^2 with c the
    mean of x^2 f(x) over [horizon, 2*horizon].

    Args:
        func: Even, vectorized integrand decaying at least like 1/x^2
        horizon: Start of the asymptotic tail, ZEROLAB_QUAD_HORIZON by default
        chunk: Width of each quadrature panel

    Returns:
        Approximation of the full-line integral
    """
    settings = get_configuration().get_quadrature_config()
    horizon = horizon or settings["horizon"]
    edges = np.arange(0.0, horizon + chunk / 2, chunk)
    panels = [
        quad(func, a, b, limit=settings["limit"], epsabs=settings["tol"], epsrel=settings["tol"])[0]
        for a, b in zip(edges[:-1], edges[1:])
    ]
    end = float(edges[-1])
    grid = np.linspace(end, 2 * end, 200_001)
    tail = float(np.mean(grid ** 2 * func(grid))) / end
    return 2.0 * (math.fsum(panels) + tail)


class PairVerification(BaseModel):
    """Outcome of verify_pair: the largest deviation seen for each identity."""
    model_config = ConfigDict(frozen=True)

    family_tag: str
    tol: float
    passed: bool
    evenness: float = Field(description="max |phi(x)-phi(-x)| and |phi_hat(y)-phi_hat(-y)|")
    support: float = Field(description="max |phi_hat(y)| for |y| >= T")
    integral: float = Field(description="|integral phi - phi_hat(0)|")
    dual_integral: float = Field(description="|integral phi_hat - phi(0)|")
    inversion: float = Field(description="max |phi(x) - inverse transform of phi_hat at x|")

    @field_validator("tol")
    @classmethod
    def validate_tol(cls, v):
        if not v > 0:
            raise ValueError("tol must be positive")
        return v


def verify_pair(fp: FourierPair, tol: float = 1e-6) -> PairVerification:
    """
    Check numerically that fp is an even Fourier pair with the declared support.

    Args:
        fp: Pair to check
        tol: Largest deviation accepted for every identity

    Returns:
        PairVerification with per-identity deviations and an overall verdict
    """
    if not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    T = fp.support_radius
    settings = get_configuration().get_quadrature_config()

    xs = np.linspace(0.0, 10.0 / T, 401)
    ys = np.linspace(0.0, T, 201)
    evenness = max(
        float(np.max(np.abs(fp.eval(xs) - fp.eval(-xs)))),
        float(np.max(np.abs(fp.eval_hat(ys) - fp.eval_hat(-ys)))),
    )

    outside = T * np.linspace(1.0, 3.0, 201)
    support = float(np.max(np.abs(np.concatenate([fp.eval_hat(outside), fp.eval_hat(-outside)]))))

    integral = abs(integrate_even(fp.phi) - fp.eval_hat(0.0))

    hat_integral = quad(fp.eval_hat, -T, T, points=[0.0], limit=settings["limit"])[0]
    dual_integral = abs(hat_integral - fp.eval(0.0))

    inversion = 0.0
    for x in np.linspace(0.0, 5.0 / T, 21):
        inverse = 2.0 * quad(
            lambda y: fp.eval_hat(y) * math.cos(2.0 * math.pi * x * y), 0.0, T, limit=settings["limit"]
        )[0]
        inversion = max(inversion, abs(inverse - fp.eval(x)))

    report = PairVerification(
        family_tag=fp.family_tag,
        tol=tol,
        passed=all(d <= tol for d in (evenness, support, integral, dual_integral, inversion)),
        evenness=evenness,
        support=support,
        integral=integral,
        dual_integral=dual_integral,
        inversion=inversion,
    )
    logger.debug("verify_pair %s: %s", fp.family_tag, report)
    return report
