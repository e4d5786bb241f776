"""
Arithmetic functions and prime sums

This module provides prime enumeration, tabulated arithmetic functions with
Dirichlet convolution, and the Mertens-type prime sums used by the second
moment computation.
"""

import logging
import math
import sys
from functools import lru_cache
from typing import Callable, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import primefactors

from zerolab.configuration_service import get_configuration
from zerolab.errors import InvalidInputError, ResourceLimitError

logger = logging.getLogger("zerolab.arith")

STANDARD_NAMES = ("mobius", "tau2", "lambda2", "phi2", "id", "one")


class PrimeTable(BaseModel):
    """
    All primes up to a limit.

    Attributes:
        limit: Upper bound of the enumeration
        primes: Ascending int64 array of every prime <= limit
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    limit: int = Field(ge=0, description="Upper bound of the enumeration")
    primes: np.ndarray = Field(description="Ascending primes <= limit")

    @field_validator("primes")
    @classmethod
    def validate_primes(cls, v):
        """Primes must be a strictly increasing 1-d integer array."""
        if v.ndim != 1 or not np.issubdtype(v.dtype, np.integer):
            raise ValueError("primes must be a 1-d integer array")
        if v.size > 1 and not np.all(np.diff(v) > 0):
            raise ValueError("primes must be strictly increasing")
        v.flags.writeable = False
        return v

    def __len__(self) -> int:
        return int(self.primes.size)

    def __contains__(self, n: int) -> bool:
        i = np.searchsorted(self.primes, n)
        return bool(i < self.primes.size and self.primes[i] == n)


def _check_limit(limit: int) -> int:
    if isinstance(limit, bool) or not isinstance(limit, (int, np.integer)):
        raise InvalidInputError(f"limit must be an integer, got {limit!r}")
    limit = int(limit)
    if limit < 0 or limit > sys.maxsize:
        raise InvalidInputError(f"limit {limit} outside [0, {sys.maxsize}]")
    return limit


def _prime_budget() -> int:
    return get_configuration().get_arith_config()["prime_limit_max"]


def sieve_primes(limit: int) -> PrimeTable:
    """
    Enumerate all primes up to limit with a sieve of Eratosthenes.

    Args:
        limit: Upper bound, 0 and 1 give an empty table

    Returns:
        PrimeTable with every prime <= limit

    Raises:
        InvalidInputError: limit is negative or not a machine integer
        ResourceLimitError: limit exceeds ZEROLAB_PRIME_LIMIT_MAX
    """
    limit = _check_limit(limit)
    if limit > _prime_budget():
        raise ResourceLimitError(
            f"prime limit {limit} exceeds the configured budget {_prime_budget()}"
        )
    if limit < 2:
        return PrimeTable(limit=limit, primes=np.array([], dtype=np.int64))

    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    primes = np.flatnonzero(is_prime).astype(np.int64)
    logger.debug("sieved %d primes up to %d", primes.size, limit)
    return PrimeTable(limit=limit, primes=primes)


class ArithFn(BaseModel):
    """
    Arithmetic function tabulated on 1..limit.

    values[n] holds f(n); values[0] is unused and kept at zero. Integer
    tables use int64 and convolve exactly.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    limit: int = Field(ge=1, description="Largest tabulated argument")
    values: np.ndarray = Field(description="values[n] = f(n) for 1 <= n <= limit")

    @field_validator("values")
    @classmethod
    def validate_values(cls, v):
        """Values must be a 1-d numeric array with finite f(1)."""
        if v.ndim != 1 or v.size < 2:
            raise ValueError("values must be a 1-d array covering n = 1")
        if not (np.issubdtype(v.dtype, np.integer) or np.issubdtype(v.dtype, np.floating)):
            raise ValueError("values must be integer or floating point")
        if not np.isfinite(v[1]):
            raise ValueError("f(1) must be finite")
        v.flags.writeable = False
        return v

    @model_validator(mode="after")
    def validate_length(self):
        """The table covers exactly 0..limit."""
        if self.values.size != self.limit + 1:
            raise ValueError(f"expected {self.limit + 1} slots, got {self.values.size}")
        return self

    @classmethod
    def from_function(cls, limit: int, func: Callable[[int], float], exact: bool = False) -> "ArithFn":
        """Tabulate func on 1..limit."""
        values = np.zeros(limit + 1, dtype=np.int64 if exact else np.float64)
        for n in range(1, limit + 1):
            values[n] = func(n)
        return cls(limit=limit, values=values)

    @property
    def exact(self) -> bool:
        """Whether the table holds integers."""
        return bool(np.issubdtype(self.values.dtype, np.integer))

    def __call__(self, n: int):
        if not 1 <= n <= self.limit:
            raise InvalidInputError(f"argument {n} outside 1..{self.limit}")
        value = self.values[n]
        return int(value) if self.exact else float(value)

    def as_dict(self) -> Dict[int, float]:
        """Map n -> f(n) for 1 <= n <= limit."""
        return {n: self(n) for n in range(1, self.limit + 1)}

    def pointwise(self, other: "ArithFn") -> "ArithFn":
        """Pointwise product f(n)*g(n)."""
        _check_same_limit(self, other)
        return ArithFn(limit=self.limit, values=self.values * other.values)


def _check_same_limit(f: ArithFn, g: ArithFn) -> None:
    if f.limit != g.limit:
        raise InvalidInputError(f"mismatched limits {f.limit} and {g.limit}")


def dirichlet_convolve(f: ArithFn, g: ArithFn) -> ArithFn:
    """
    Dirichlet convolution (f*g)(n) = sum over d | n of f(d) g(n/d).

    Args:
        f: First factor
        g: Second factor, same limit as f

    Returns:
        Convolution on the shared range, integer when both inputs are

    Raises:
        InvalidInputError: limits differ
    """
    _check_same_limit(f, g)
    limit = f.limit
    dtype = np.int64 if (f.exact and g.exact) else np.float64
    fv = f.values.astype(dtype, copy=False)
    gv = g.values.astype(dtype, copy=False)
    h = np.zeros(limit + 1, dtype=dtype)
    for d in range(1, limit + 1):
        fd = fv[d]
        if fd == 0:
            continue
        # h[d*k] += f(d) g(k) for k <= limit // d
        h[d::d] += fd * gv[1:limit // d + 1]
    return ArithFn(limit=limit, values=h)


@lru_cache(maxsize=32)
def _mobius_table(limit: int) -> np.ndarray:
    mu = np.ones(limit + 1, dtype=np.int64)
    mu[0] = 0
    for p in sieve_primes(limit).primes.tolist():
        mu[p::p] *= -1
        mu[p * p::p * p] = 0
    mu.flags.writeable = False
    return mu


def unit_fn(limit: int) -> ArithFn:
    """Convolution identity e(n) = 1 if n = 1 else 0."""
    values = np.zeros(limit + 1, dtype=np.int64)
    values[1] = 1
    return ArithFn(limit=limit, values=values)


def standard_fn(name: str, limit: int) -> ArithFn:
    """
    Tabulate a named arithmetic function.

    lambda2 = mobius*mobius and phi2 = lambda2*mobius^2*id are built by
    convolution; everything here is exact.

    Args:
        name: One of mobius, tau2, lambda2, phi2, id, one
        limit: Largest argument

    Returns:
        Integer ArithFn

    Raises:
        InvalidInputError: unknown name or limit < 1
    """
    limit = _check_limit(limit)
    if limit < 1:
        raise InvalidInputError("limit must be at least 1")
    if name not in STANDARD_NAMES:
        raise InvalidInputError(f"unknown arithmetic function {name!r}; expected one of {STANDARD_NAMES}")

    if name == "one":
        values = np.ones(limit + 1, dtype=np.int64)
        values[0] = 0
        return ArithFn(limit=limit, values=values)
    if name == "id":
        return ArithFn(limit=limit, values=np.arange(limit + 1, dtype=np.int64))
    mobius = ArithFn(limit=limit, values=_mobius_table(limit).copy())
    if name == "mobius":
        return mobius
    if name == "tau2":
        one = standard_fn("one", limit)
        return dirichlet_convolve(one, one)
    lambda2 = dirichlet_convolve(mobius, mobius)
    if name == "lambda2":
        return lambda2
    # phi2
    squarefree = mobius.pointwise(mobius)
    return dirichlet_convolve(dirichlet_convolve(lambda2, squarefree), standard_fn("id", limit))


def summatory(f: ArithFn, x: Optional[int] = None):
    """Partial sum of f(n) over n <= x, x defaulting to the table limit."""
    x = f.limit if x is None else min(int(x), f.limit)
    if x < 1:
        return 0
    total = f.values[1:x + 1].sum()
    return int(total) if f.exact else float(total)


def prime_window(log_c: float, support: float, nu: int) -> int:
    """
    Largest integer x with x <= exp(support*log_c/nu), the prime cutoff of a nu-block.

    Raises:
        ResourceLimitError: the cutoff exceeds ZEROLAB_PRIME_LIMIT_MAX
    """
    bound = support * log_c / nu
    if bound < math.log(2):
        return 1
    # compare logs, exp overflows past ~709
    if bound >= math.log(_prime_budget() + 1):
        raise ResourceLimitError(
            f"prime cutoff exp({bound:.6g}) exceeds the configured budget {_prime_budget()}"
        )
    return int(math.floor(math.exp(bound)))


def mertens_weighted_sum(fp, log_c: float, nu: int) -> float:
    """
    Weighted prime sum sum_p phi_hat(nu log p / log_c) * 2 log p / (p^(nu/2) log_c).

    The sum runs over every prime p <= exp(T*log_c/nu) where T is the
    support radius of fp. For nu = 2 it tends to phi(0)/2.

    Args:
        fp: FourierPair supplying phi_hat and its support radius
        log_c: Logarithm of the conductor, positive
        nu: 1 or 2

    Returns:
        The prime sum, 0.0 for an empty prime range

    Raises:
        InvalidInputError: log_c <= 0 or nu not in {1, 2}
        ResourceLimitError: prime cutoff exceeds ZEROLAB_PRIME_LIMIT_MAX
    """
    if not log_c > 0:
        raise InvalidInputError(f"log_c must be positive, got {log_c}")
    if nu not in (1, 2):
        raise InvalidInputError(f"nu must be 1 or 2, got {nu}")

    cutoff = prime_window(log_c, fp.support_radius, nu)
    if cutoff < 2:
        return 0.0

    primes = sieve_primes(cutoff).primes.astype(np.float64)
    log_p = np.log(primes)
    weights = 2.0 * log_p / (primes ** (nu / 2.0) * log_c)
    return float(np.sum(fp.eval_hat(nu * log_p / log_c) * weights))


def dampening_ratio(f: ArithFn, eps: float) -> float:
    """
    Compare a log-damped sum with its undamped counterpart.

    Returns the ratio of sum_{2 <= n <= X} f(n)/log(n)^eps to
    sum_{n <= X} f(n)/log(X)^eps with X the table limit. For nonnegative f of
    polynomial growth the ratio stays bounded as X grows.

    Args:
        f: Tabulated function with limit X >= 3
        eps: Damping exponent, positive
    """
    if not eps > 0:
        raise InvalidInputError(f"eps must be positive, got {eps}")
    if f.limit < 3:
        raise InvalidInputError("dampening ratio needs a table limit of at least 3")
    n = np.arange(2, f.limit + 1, dtype=np.float64)
    damped = float(np.sum(f.values[2:].astype(np.float64) / np.log(n) ** eps))
    total = float(summatory(f))
    if total == 0.0:
        return math.inf
    return damped / (total / math.log(f.limit) ** eps)


def prime_divisor_power_sum(q: int, s: float) -> float:
    """Sum of log(p)/p^s over the prime divisors of q for any real s."""
    if q == 1:
        return 0.0
    return math.fsum(math.log(p) / p ** s for p in primefactors(q))


def prime_divisor_log_sum(q: int, s: float) -> float:
    """
    Sum of log(p)/p^s over the prime divisors of q.

    Args:
        q: Positive integer, q = 1 gives 0
        s: Exponent in (0, 1]

    Returns:
        The divisor sum
    """
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or q < 1:
        raise InvalidInputError(f"q must be a positive integer, got {q!r}")
    if not 0 < s <= 1:
        raise InvalidInputError(f"s must lie in (0, 1], got {s}")
    return prime_divisor_power_sum(int(q), s)
