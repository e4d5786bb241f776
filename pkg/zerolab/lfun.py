"""
Satake parameters, Hecke eigenvalues and the explicit formula

This module provides the local arithmetic of degree-2 L-functions over Q
(Satake angles, Hecke recursions, Dirichlet coefficients, Euler factors),
the conductor and multiplicity model, and the explicit-formula engine that
turns Satake data into one-level densities.
"""

import cmath
import logging
import math
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator
from sympy import divisor_count, isprime

from zerolab.arith import prime_window, sieve_primes
from zerolab.configuration_service import get_configuration
from zerolab.errors import HorizonError, InvalidInputError, SingularityError
from zerolab.models import LocalStatus, ThetaMeasure
from zerolab.rmt import draw_generator
from zerolab.testfn import FourierPair

logger = logging.getLogger("zerolab.lfun")

# Exponent of the best known bound |alpha| <= p^(7/64) towards Ramanujan
RAMANUJAN_EXPONENT = 7.0 / 64.0
# theta(x) < 1.01624 x for all x > 0
CHEBYSHEV_THETA_CONSTANT = 1.01624


class SatakeLocal(BaseModel):
    """
    Local data of a representation at a prime p.

    Unramified locals carry a Satake angle theta in [0, pi] with
    alpha = exp(i theta) and beta = 1/alpha; ramified locals carry none.
    """
    model_config = ConfigDict(frozen=True)

    p: int = Field(ge=2, description="Prime")
    status: LocalStatus = Field(description="Unramified or ramified")
    theta: Optional[float] = Field(default=None, description="Satake angle in [0, pi]")

    @field_validator("p")
    @classmethod
    def validate_prime(cls, v):
        if not isprime(v):
            raise ValueError(f"{v} is not prime")
        return v

    @model_validator(mode="after")
    def validate_theta(self):
        """Unramified locals need an angle in [0, pi]; ramified ones must not carry one."""
        if self.status == LocalStatus.UNRAMIFIED:
            if self.theta is None or not 0.0 <= self.theta <= math.pi:
                raise ValueError(f"unramified local at {self.p} needs theta in [0, pi], got {self.theta}")
        elif self.theta is not None:
            raise ValueError(f"ramified local at {self.p} cannot carry a Satake angle")
        return self

    @property
    def ramified(self) -> bool:
        return self.status == LocalStatus.RAMIFIED

    @property
    def alpha(self) -> complex:
        self._require_unramified("alpha")
        return cmath.exp(1j * self.theta)

    @property
    def beta(self) -> complex:
        self._require_unramified("beta")
        return cmath.exp(-1j * self.theta)

    def _require_unramified(self, what: str) -> None:
        if self.ramified:
            raise InvalidInputError(f"{what} is undefined at the ramified prime {self.p}")


def unramified(p: int, theta: float) -> SatakeLocal:
    return SatakeLocal(p=p, status=LocalStatus.UNRAMIFIED, theta=theta)


def ramified(p: int) -> SatakeLocal:
    return SatakeLocal(p=p, status=LocalStatus.RAMIFIED)


def _check_nonnegative(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 0:
        raise InvalidInputError(f"{name} must be a nonnegative integer, got {value!r}")


def hecke_eigenvalue(local: SatakeLocal, nu: int) -> float:
    """
    Hecke eigenvalue lambda(p^nu).

    Unramified: lambda(1) = 1, lambda(p) = 2 cos theta and
    lambda(p^(k+1)) = lambda(p) lambda(p^k) - lambda(p^(k-1)).
    Ramified: 1 for nu = 0 and 0 otherwise.
    """
    _check_nonnegative("nu", nu)
    if local.ramified:
        return 1.0 if nu == 0 else 0.0
    previous, current = 1.0, 2.0 * math.cos(local.theta)
    if nu == 0:
        return previous
    for _ in range(nu - 1):
        previous, current = current, current * (2.0 * math.cos(local.theta)) - previous
    return current


def dirichlet_coefficient(local: SatakeLocal, n: int) -> float:
    """a(p^n) = sum over i + j = n of alpha^i beta^j."""
    _check_nonnegative("n", n)
    local._require_unramified("the Dirichlet coefficient")
    exponents = 2 * np.arange(n + 1) - n
    return float(np.sum(np.exp(1j * local.theta * exponents)).real)


def power_sum(local: SatakeLocal, nu: int) -> float:
    """alpha^nu + beta^nu = 2 cos(nu theta)."""
    if isinstance(nu, bool) or not isinstance(nu, (int, np.integer)) or nu < 1:
        raise InvalidInputError(f"nu must be a positive integer, got {nu!r}")
    local._require_unramified("the power sum")
    return 2.0 * math.cos(nu * local.theta)


def local_L_factor(local: SatakeLocal, s: complex) -> complex:
    """
    Euler factor (1 - alpha p^-s)^-1 (1 - beta p^-s)^-1.

    Args:
        local: Unramified local
        s: Point with Re(s) >= 0; poles can only occur on Re(s) = 0

    Raises:
        SingularityError: p^-s equals alpha or beta
    """
    s = complex(s)
    if s.real < 0:
        raise InvalidInputError(f"Re(s) must be nonnegative, got {s}")
    local._require_unramified("the local L-factor")
    x = local.p ** (-s)
    left = 1.0 - local.alpha * x
    right = 1.0 - local.beta * x
    if min(abs(left), abs(right)) < 1e-14:
        raise SingularityError(
            f"local L-factor at p={local.p} has a pole at s={s}",
            {"p": local.p, "theta": local.theta, "s": str(s)},
        )
    return 1.0 / (left * right)


def multiplicity(c_arith: int, d: int) -> int:
    """Number of oldforms of level d coming from a newform of level c_arith: tau2(d/c) if c | d, else 0."""
    for name, value in (("c_arith", c_arith), ("d", d)):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
            raise InvalidInputError(f"{name} must be a positive integer, got {value!r}")
    if d % c_arith:
        return 0
    return int(divisor_count(d // c_arith))


def casselman_dimension(conductor_exponent: int, r: int) -> int:
    """Dimension of the K_0(p^r)-fixed vectors of a local representation with the given conductor exponent."""
    _check_nonnegative("conductor_exponent", conductor_exponent)
    _check_nonnegative("r", r)
    return r - conductor_exponent + 1 if r >= conductor_exponent else 0


def character_conductor_exponent(chi_ramified: bool, chi_exponent: int = 0) -> int:
    """Conductor exponent of a character of the quaternion units: 1 if unramified, else twice the character's exponent."""
    if not chi_ramified:
        return 1
    if chi_exponent < 1:
        raise InvalidInputError("a ramified character has conductor exponent at least 1")
    return 2 * chi_exponent


def analytic_conductor(q: int, archimedean_mu: Sequence[complex] = ()) -> float:
    """q times the archimedean factor prod(1 + |mu_j|)."""
    if q < 1:
        raise InvalidInputError(f"arithmetic conductor must be positive, got {q}")
    return float(q) * math.prod(1.0 + abs(mu) for mu in archimedean_mu)


class AutoRep(BaseModel):
    """
    Synthetic cuspidal representation known through its local data.

    Attributes:
        conductor: Analytic conductor c >= 1
        arithmetic_conductor: Integer level q
        root_number: +1 or -1
        horizon: Locals are stored for every prime up to this bound
        locals: Prime -> SatakeLocal
    """
    model_config = ConfigDict(frozen=True)

    conductor: float = Field(ge=1.0, description="Analytic conductor")
    arithmetic_conductor: int = Field(default=1, ge=1, description="Arithmetic conductor q")
    root_number: int = Field(default=1, description="Sign of the functional equation")
    horizon: int = Field(ge=1, description="Prime horizon")
    locals: Dict[int, SatakeLocal] = Field(description="Local data for every prime <= horizon")

    _primes: np.ndarray = PrivateAttr()
    _thetas: np.ndarray = PrivateAttr()
    _unramified: np.ndarray = PrivateAttr()

    @field_validator("root_number")
    @classmethod
    def validate_root_number(cls, v):
        if v not in (1, -1):
            raise ValueError("root number must be +1 or -1")
        return v

    @model_validator(mode="after")
    def validate_locals(self):
        """Locals cover exactly the primes up to the horizon; ramified exactly at p | q."""
        expected = sieve_primes(self.horizon).primes.tolist()
        if sorted(self.locals) != expected:
            missing = sorted(set(expected) - set(self.locals))[:5]
            raise ValueError(f"locals must cover every prime <= {self.horizon} and nothing else (missing e.g. {missing})")
        for p, local in self.locals.items():
            if local.p != p:
                raise ValueError(f"local stored under {p} describes {local.p}")
            if local.ramified != (self.arithmetic_conductor % p == 0):
                raise ValueError(f"prime {p} must be ramified exactly when it divides {self.arithmetic_conductor}")
        return self

    def model_post_init(self, __context) -> None:
        primes = np.array(sorted(self.locals), dtype=np.int64)
        thetas = np.array([np.nan if self.locals[p].ramified else self.locals[p].theta for p in primes.tolist()])
        self._primes = primes
        self._thetas = thetas
        self._unramified = ~np.isnan(thetas)

    @property
    def log_conductor(self) -> float:
        return math.log(self.conductor)

    def window(self, cutoff: int) -> Tuple[np.ndarray, np.ndarray]:
        """Unramified primes <= cutoff and their Satake angles."""
        mask = (self._primes <= cutoff) & self._unramified
        return self._primes[mask], self._thetas[mask]

    def ramified_primes(self) -> List[int]:
        return [p for p, local in self.locals.items() if local.ramified]


class ExplicitFormulaResult(BaseModel):
    """One-level density computed from Satake data."""
    model_config = ConfigDict(frozen=True)

    value: float = Field(description="phi_hat(0) log c/log R minus the prime blocks")
    leading: float = Field(description="phi_hat(0) log c/log R")
    per_nu: List[float] = Field(description="P^(nu) for nu = 1..nu_max")
    tail_bound: float = Field(ge=0, description="Majorant of the blocks nu > nu_max")
    ramified_bound: float = Field(ge=0, description="Majorant of the omitted ramified contributions")
    log_r: float = Field(description="Normalizing logarithm")


def required_horizon(rep_conductor: float, fp: FourierPair, log_r: Optional[float] = None) -> int:
    """Prime horizon needed to evaluate the explicit formula of a representation against fp."""
    L = log_r if log_r is not None else math.log(rep_conductor)
    return prime_window(L, fp.support_radius, 1)


@lru_cache(maxsize=16)
def _ramanujan_majorant(nu_start: int, prime_limit: int) -> float:
    """
    sum over all p and nu >= nu_start of 2 log p * p^(nu*(7/64 - 1/2)).

    Primes up to prime_limit are summed exactly; the rest is bounded with
    Chebyshev's theta(x) < 1.01624 x after summing the geometric series in nu.
    """
    sigma = 0.5 - RAMANUJAN_EXPONENT
    s = sigma * nu_start
    primes = sieve_primes(prime_limit).primes.astype(np.float64)
    x = primes ** -sigma
    head = float(np.sum(2.0 * np.log(primes) * x ** nu_start / (1.0 - x)))
    P = float(prime_limit)
    tail = 2.0 / (1.0 - P ** -sigma) * CHEBYSHEV_THETA_CONSTANT * s * P ** (1.0 - s) / (s - 1.0)
    return head + tail


def _tail_majorant(L: float, fp: FourierPair, nu_start: int) -> float:
    prime_limit = get_configuration().get_arith_config()["tail_prime_limit"]
    return 2.0 / L * fp.hat_sup() * _ramanujan_majorant(nu_start, prime_limit)


def explicit_formula_density(rep: AutoRep, fp: FourierPair, nu_max: int = 2,
                             log_r: Optional[float] = None) -> ExplicitFormulaResult:
    """
    One-level density D(pi, phi) from the explicit formula.

    value = phi_hat(0) log c/log R - sum_{nu=1}^{nu_max} P^(nu) with
    P^(nu) = (2/log R) sum_p (alpha^nu + beta^nu) phi_hat(nu log p/log R) log p / p^(nu/2)
    over unramified p <= R^(T/nu). Ramified primes contribute nothing;
    their possible size is reported as ramified_bound.

    Args:
        rep: Representation with a sufficient prime horizon
        fp: Test function
        nu_max: Largest prime power block, at least 2
        log_r: Normalizing logarithm, log c by default

    Returns:
        ExplicitFormulaResult

    Raises:
        HorizonError: rep.horizon is below floor(R^T)
    """
    if isinstance(nu_max, bool) or not isinstance(nu_max, int) or nu_max < 2:
        raise InvalidInputError(f"nu_max must be an integer >= 2, got {nu_max!r}")
    if rep.conductor <= 1.0:
        raise InvalidInputError("the explicit formula needs a conductor above 1")
    log_c = rep.log_conductor
    L = log_c if log_r is None else float(log_r)
    if not L > 0:
        raise InvalidInputError(f"log_r must be positive, got {log_r}")

    needed = prime_window(L, fp.support_radius, 1)
    if needed > rep.horizon:
        raise HorizonError(f"horizon {rep.horizon} too small for support {fp.support_radius}", needed)

    leading = fp.eval_hat(0.0) if log_r is None else fp.eval_hat(0.0) * log_c / L
    per_nu = []
    for nu in range(1, nu_max + 1):
        primes, thetas = rep.window(prime_window(L, fp.support_radius, nu))
        if primes.size == 0:
            per_nu.append(0.0)
            continue
        p = primes.astype(np.float64)
        log_p = np.log(p)
        terms = 2.0 * np.cos(nu * thetas) * fp.eval_hat(nu * log_p / L) * log_p / p ** (nu / 2.0)
        per_nu.append(float(2.0 / L * np.sum(terms)))

    hat_sup = fp.hat_sup()
    ramified_terms = []
    for p in rep.ramified_primes():
        for nu in range(1, nu_max + 1):
            if p <= prime_window(L, fp.support_radius, nu):
                ramified_terms.append(2.0 * math.log(p) * p ** (nu * (RAMANUJAN_EXPONENT - 0.5)))

    return ExplicitFormulaResult(
        value=leading - math.fsum(per_nu),
        leading=leading,
        per_nu=per_nu,
        tail_bound=_tail_majorant(L, fp, nu_max + 1),
        ramified_bound=2.0 / L * hat_sup * math.fsum(ramified_terms),
        log_r=L,
    )


def tail_estimate(rep: AutoRep, fp: FourierPair) -> float:
    """
    Majorant of |sum_{nu >= 3} P^(nu)| using |alpha|, |beta| <= p^(7/64).

    Equals (2/log c) sup|phi_hat| sum_p sum_{nu >= 3} 2 p^(7 nu/64) log p / p^(nu/2),
    so it decays like 1/log c.
    """
    if rep.conductor <= 1.0:
        raise InvalidInputError("the tail estimate needs a conductor above 1")
    return _tail_majorant(rep.log_conductor, fp, 3)


class ZerosRecord(BaseModel):
    """Ordinates of the nontrivial zeros of one L-function."""
    model_config = ConfigDict(frozen=True)

    conductor: float = Field(gt=0, description="Analytic conductor")
    ordinates: Tuple[float, ...] = Field(default=(), description="Unnormalized real ordinates")

    @field_validator("ordinates")
    @classmethod
    def validate_ordinates(cls, v):
        if not all(math.isfinite(g) for g in v):
            raise ValueError("ordinates must be finite")
        return v

    def normalized(self) -> np.ndarray:
        """Ordinates scaled by log c/(2 pi) to unit mean spacing."""
        if self.conductor <= 1.0:
            raise InvalidInputError("normalizing zeros needs a conductor above 1")
        return np.asarray(self.ordinates, dtype=np.float64) * math.log(self.conductor) / (2.0 * math.pi)


def density_from_zeros(z: ZerosRecord, fp: FourierPair) -> float:
    """Sum of phi over the normalized zeros."""
    gammas = z.normalized()
    if gammas.size == 0:
        return 0.0
    return float(np.sum(fp.eval(gammas)))


def pair_correlation_from_zeros(z: ZerosRecord, fp: FourierPair) -> float:
    """(1/N) sum over j != k of phi at differences of normalized zeros."""
    gammas = z.normalized()
    if gammas.size < 2:
        raise InvalidInputError("pair correlation needs at least two zeros")
    values = fp.eval(gammas[:, None] - gammas[None, :])
    return float((values.sum() - np.trace(values)) / gammas.size)


def central_order(z: ZerosRecord, tol: float = 1e-9) -> int:
    """Number of stored ordinates within tol of the central point."""
    return int(sum(abs(g) <= tol for g in z.ordinates))


def sample_thetas(rng: np.random.Generator, size: int, measure: ThetaMeasure) -> np.ndarray:
    """Satake angles from the uniform law on [0, pi] or the Sato-Tate law (2/pi) sin^2."""
    if ThetaMeasure(measure) == ThetaMeasure.UNIFORM:
        return rng.uniform(0.0, math.pi, size)
    accepted = np.empty(0)
    while accepted.size < size:
        proposal = rng.uniform(0.0, math.pi, 2 * (size - accepted.size) + 8)
        keep = rng.uniform(0.0, 1.0, proposal.size) < np.sin(proposal) ** 2
        accepted = np.concatenate([accepted, proposal[keep]])
    return accepted[:size]


def synthetic_rep(
    conductor: float,
    horizon: int,
    arithmetic_conductor: int = 1,
    measure: ThetaMeasure = ThetaMeasure.SATO_TATE,
    seed: int = 0,
    root_number: int = 1,
    theta: Optional[float] = None,
    draw_index: Optional[int] = None,
) -> AutoRep:
    """
    Seeded synthetic representation.

    Args:
        conductor: Analytic conductor
        horizon: Prime horizon
        arithmetic_conductor: Level q; its prime divisors are ramified
        measure: Law of the Satake angles
        seed: Seed of the angle stream
        root_number: +1 or -1
        theta: Use this angle at every unramified prime instead of sampling
        draw_index: Independent stream index under the same seed, for family members
    """
    primes = sieve_primes(horizon).primes.tolist()
    if theta is None:
        thetas = sample_thetas(draw_generator(seed, draw_index), len(primes), measure).tolist()
    else:
        thetas = [float(theta)] * len(primes)
    locals_ = {
        p: ramified(p) if arithmetic_conductor % p == 0 else unramified(p, t)
        for p, t in zip(primes, thetas)
    }
    return AutoRep(
        conductor=conductor,
        arithmetic_conductor=arithmetic_conductor,
        root_number=root_number,
        horizon=horizon,
        locals=locals_,
    )
