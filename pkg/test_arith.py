"""
Test script for the arith module.

Covers prime enumeration, exact Dirichlet convolution of the standard
functions, the Mertens-type prime sums and the prime-divisor sums.
"""

import math

import numpy as np
import pytest

from zerolab.arith import (
    ArithFn,
    dampening_ratio,
    dirichlet_convolve,
    mertens_weighted_sum,
    prime_divisor_log_sum,
    prime_window,
    sieve_primes,
    standard_fn,
    summatory,
    unit_fn,
)
from zerolab.errors import InvalidInputError, ResourceLimitError
from zerolab.family import lambda2
from zerolab.testfn import fejer_pair


def test_sieve_small_limits():
    """0 and 1 give empty tables, 30 gives the ten primes below it."""
    assert len(sieve_primes(0)) == 0
    assert len(sieve_primes(1)) == 0
    assert sieve_primes(30).primes.tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert 29 in sieve_primes(30)
    assert 27 not in sieve_primes(30)


def test_sieve_prime_counts():
    """pi(10^6) = 78498."""
    assert len(sieve_primes(10**6)) == 78498
    assert sieve_primes(10**6).primes[-1] == 999983


def test_sieve_rejects_bad_limits():
    with pytest.raises(InvalidInputError):
        sieve_primes(-1)
    with pytest.raises(InvalidInputError):
        sieve_primes(2.5)
    with pytest.raises(InvalidInputError):
        sieve_primes(2**80)
    with pytest.raises(ResourceLimitError):
        sieve_primes(10**9)


def test_prime_table_is_read_only():
    table = sieve_primes(100)
    with pytest.raises(ValueError):
        table.primes[0] = 4


def test_mobius_inverts_one():
    """mobius * one = e exactly."""
    limit = 2000
    result = dirichlet_convolve(standard_fn("mobius", limit), standard_fn("one", limit))
    assert result.exact
    assert np.array_equal(result.values, unit_fn(limit).values)


def test_tau2_values():
    tau2 = standard_fn("tau2", 100)
    assert tau2(1) == 1
    assert tau2(12) == 6
    assert tau2(97) == 2
    assert tau2(64) == 7


def test_lambda2_matches_multiplicative_formula():
    """lambda2 = mobius * mobius is -2 at p, 1 at p^2 and 0 at higher powers."""
    table = standard_fn("lambda2", 1000)
    assert table(7) == -2
    assert table(49) == 1
    assert table(8) == 0
    assert table(6) == 4
    assert all(table(n) == lambda2(n) for n in range(1, 1001))


def test_phi2_values():
    """phi2(p) = p - 1 and phi2(p^2) = p^2 - p - 1."""
    phi2 = standard_fn("phi2", 200)
    assert phi2(1) == 1
    assert phi2(7) == 6
    assert phi2(4) == 1
    assert phi2(9) == 5
    assert phi2(121) == 121 - 11 - 1


def _random_fn(rng, limit):
    values = rng.integers(-5, 6, size=limit + 1).astype(np.int64)
    values[0] = 0
    return ArithFn(limit=limit, values=values)


def test_convolution_commutes_and_associates():
    """Exact on random integer tables up to 1000."""
    rng = np.random.default_rng(7)
    limit = 1000
    for _ in range(3):
        f, g, h = (_random_fn(rng, limit) for _ in range(3))
        assert np.array_equal(dirichlet_convolve(f, g).values, dirichlet_convolve(g, f).values)
        left = dirichlet_convolve(dirichlet_convolve(f, g), h)
        right = dirichlet_convolve(f, dirichlet_convolve(g, h))
        assert np.array_equal(left.values, right.values)


def test_unit_is_convolution_identity():
    rng = np.random.default_rng(11)
    f = _random_fn(rng, 500)
    assert np.array_equal(dirichlet_convolve(f, unit_fn(500)).values, f.values)


def test_lambda2_inverts_tau2():
    """lambda2 * tau2 = e exactly, the pair behind the old/new sieve."""
    limit = 1000
    result = dirichlet_convolve(standard_fn("lambda2", limit), standard_fn("tau2", limit))
    assert result.exact
    assert np.array_equal(result.values, unit_fn(limit).values)


def test_convolution_rejects_mismatched_limits():
    with pytest.raises(InvalidInputError):
        dirichlet_convolve(standard_fn("one", 10), standard_fn("one", 11))


def test_unknown_standard_fn():
    with pytest.raises(InvalidInputError):
        standard_fn("sigma", 10)


def test_float_convolution():
    """Float tables convolve in floating point; one * one = tau2."""
    limit = 50
    one = ArithFn.from_function(limit, lambda n: 1.0)
    result = dirichlet_convolve(one, one)
    assert not result.exact
    assert result(12) == pytest.approx(6.0)


def test_arith_fn_length_validation():
    with pytest.raises(ValueError):
        ArithFn(limit=5, values=np.zeros(4, dtype=np.int64))


def test_summatory():
    assert summatory(standard_fn("one", 100)) == 100
    assert summatory(standard_fn("one", 100), 10) == 10
    # Mertens function: M(10) = -1, M(100) = 1
    assert summatory(standard_fn("mobius", 10)) == -1
    assert summatory(standard_fn("mobius", 100)) == 1


def test_prime_window():
    assert prime_window(1.0, 0.5, 1) == 1
    assert prime_window(20.0, 0.5, 1) == math.floor(math.exp(10.0))
    assert prime_window(20.0, 0.5, 2) == math.floor(math.exp(5.0))


def test_prime_window_beyond_budget():
    """Cutoffs past the prime budget raise before exp can overflow."""
    with pytest.raises(ResourceLimitError):
        prime_window(2000.0, 1.0, 1)
    with pytest.raises(ResourceLimitError):
        prime_window(30.0, 1.0, 1)
    with pytest.raises(ResourceLimitError):
        mertens_weighted_sum(fejer_pair(1.0), 1000.0, 1)


def test_mertens_empty_range():
    """A cutoff below 2 gives an empty prime sum."""
    assert mertens_weighted_sum(fejer_pair(1.0), 0.5, 2) == 0.0


def test_mertens_rejects_bad_input():
    fp = fejer_pair(1.0)
    with pytest.raises(InvalidInputError):
        mertens_weighted_sum(fp, 0.0, 2)
    with pytest.raises(InvalidInputError):
        mertens_weighted_sum(fp, 10.0, 3)


def test_mertens_prime_square_sum_tends_to_half_phi0():
    """fejer(1), log c = 30: the nu = 2 sum lies within 0.1 of phi(0)/2 and improves on log c = 15."""
    fp = fejer_pair(1.0)
    deviation_30 = abs(mertens_weighted_sum(fp, 30.0, 2) - 0.5)
    deviation_15 = abs(mertens_weighted_sum(fp, 15.0, 2) - 0.5)
    assert deviation_30 <= 0.1
    assert deviation_30 <= deviation_15


def test_mertens_matches_direct_sum():
    fp = fejer_pair(0.5)
    log_c = 12.0
    expected = math.fsum(
        (1.0 - abs(math.log(p) / log_c) / 0.5) * 2.0 * math.log(p) / (math.sqrt(p) * log_c)
        for p in sieve_primes(int(math.exp(6.0))).primes.tolist()
    )
    assert mertens_weighted_sum(fp, log_c, 1) == pytest.approx(expected, abs=1e-12)


def test_prime_divisor_log_sum():
    assert prime_divisor_log_sum(1, 0.5) == 0.0
    assert prime_divisor_log_sum(12, 1.0) == pytest.approx(math.log(2) / 2 + math.log(3) / 3)
    with pytest.raises(InvalidInputError):
        prime_divisor_log_sum(12, 0.0)
    with pytest.raises(InvalidInputError):
        prime_divisor_log_sum(12, 1.5)
    with pytest.raises(InvalidInputError):
        prime_divisor_log_sum(0, 0.5)


def test_prime_divisor_log_sum_growth_on_primorials():
    """The s = 1/2 sum stays below 1.5 sqrt(log q) log log q on primorials."""
    primes = sieve_primes(60).primes.tolist()
    for k in range(2, 16):
        q = math.prod(primes[:k])
        value = prime_divisor_log_sum(q, 0.5)
        assert value / (math.sqrt(math.log(q)) * math.log(math.log(q))) <= 1.5


def test_dampening_ratio_bounded():
    """For f = 1 the log-damped sum stays comparable to the undamped one."""
    for limit in (10**3, 10**4, 10**5):
        ratio = dampening_ratio(standard_fn("one", limit), 0.5)
        assert 0.99 <= ratio <= 1.5


def test_dampening_ratio_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        dampening_ratio(standard_fn("one", 100), 0.0)
    with pytest.raises(InvalidInputError):
        dampening_ratio(standard_fn("one", 2), 0.5)
