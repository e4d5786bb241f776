"""
Test script for family statistics.

Covers the old/new sieve on divisor lattices, family-averaged densities,
the prime-square shift and the non-vanishing bounds.
"""

import math
import random
from fractions import Fraction

import pytest
from pydantic import ValidationError

from zerolab.arith import mertens_weighted_sum
from zerolab.errors import InvalidInputError
from zerolab.family import (
    FamilyModel,
    SievedSums,
    averaged_density,
    divisor_lattice,
    nonvanishing_bounds,
    order_bounds,
    ramified_bound,
    second_order_shift,
    sieve_new_from_old,
    sieve_old_from_new,
    sieve_round_trip,
    synthetic_family,
    vanishing_proportions,
)
from zerolab.lfun import ZerosRecord, synthetic_rep
from zerolab.progress_tracker import ProgressTracker
from zerolab.testfn import fejer_pair, scaled


def test_sieve_at_a_prime():
    """At a prime level the new sum is old(q) - 2 old(1)."""
    assert sieve_new_from_old(7, {1: 5, 7: 3}) == {1: 5, 7: -7}
    assert sieve_old_from_new(7, {1: 5, 7: -7}) == {1: 5, 7: 3}


def test_sieve_at_level_one():
    assert sieve_new_from_old(1, {1: 4}) == {1: 4}
    assert sieve_old_from_new(1, {1: Fraction(1, 3)}) == {1: Fraction(1, 3)}


def test_sieve_round_trip_exact_values():
    rng = random.Random(360)
    lattice = divisor_lattice(360)
    ints = {d: rng.randint(-50, 50) for d in lattice}
    fractions = {d: Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for d in lattice}
    assert sieve_round_trip(360, ints)
    assert sieve_round_trip(360, fractions)
    assert SievedSums.from_old(360, fractions).round_trip_exact()


def test_sieve_rejects_bad_keys():
    with pytest.raises(InvalidInputError):
        sieve_new_from_old(12, {1: 1, 2: 1, 3: 1, 4: 1, 6: 1})
    with pytest.raises(InvalidInputError):
        sieve_new_from_old(7, {1: 1, 7: 1, 5: 1})
    with pytest.raises(InvalidInputError):
        sieve_old_from_new(0, {})


def test_sieve_round_trip_small_levels():
    rng = random.Random(1)
    for q in range(1, 501):
        values = {d: rng.randint(-10, 10) for d in divisor_lattice(q)}
        assert sieve_round_trip(q, values)


@pytest.mark.slow
def test_sieve_round_trip_all_levels():
    rng = random.Random(2)
    for q in range(1, 10001):
        for _ in range(10):
            values = {d: rng.randint(-1000, 1000) for d in divisor_lattice(q)}
            assert sieve_round_trip(q, values)


def test_family_validation():
    with pytest.raises(ValidationError):
        FamilyModel(members=[])
    with pytest.raises(ValidationError):
        FamilyModel(members=[synthetic_rep(100.0, 10), synthetic_rep(100.0, 20)])
    with pytest.raises(InvalidInputError):
        synthetic_family(0, 100.0, 10)


def test_synthetic_family_root_numbers():
    family = synthetic_family(3, 100.0, 30, seed=9)
    assert [rep.root_number for rep in family.members] == [1, -1, 1]
    assert family.horizon == 30
    assert family.label == "synthetic-sato-tate-9"


def test_averaged_density_empty_window():
    fp = fejer_pair(0.5)
    report = averaged_density(FamilyModel(members=[synthetic_rep(3.0, 10)]), fp)
    assert report.mean == 1.0
    assert report.predicted == pytest.approx(1.25)
    assert report.deviation == pytest.approx(-0.5 * fp.eval(0.0))


def test_averaged_density_ignores_order_and_duplication():
    fp = fejer_pair(0.5)
    a = synthetic_rep(math.exp(12), 500, seed=1, draw_index=0)
    b = synthetic_rep(math.exp(12), 500, seed=1, draw_index=1)
    base = averaged_density(FamilyModel(members=[a, b]), fp, threads=2)
    swapped = averaged_density(FamilyModel(members=[b, a]), fp, threads=1)
    doubled = averaged_density(FamilyModel(members=[a, b, a, b]), fp, threads=3)
    assert swapped.mean == pytest.approx(base.mean, abs=1e-12)
    assert doubled.mean == pytest.approx(base.mean, abs=1e-12)
    assert swapped.per_rep == [base.per_rep[1], base.per_rep[0]]


def test_averaged_density_is_linear():
    fp = fejer_pair(0.5)
    family = synthetic_family(4, math.exp(12), 500, seed=3)
    assert averaged_density(family, scaled(fp, 3.0)).mean == pytest.approx(
        3.0 * averaged_density(family, fp).mean, abs=1e-12)


def test_averaged_density_of_conjugate_angles():
    """Angles pi/3 and 2pi/3 cancel in the first block and leave the Mertens sum in the second."""
    fp = fejer_pair(0.5)
    L = 12.0
    family = FamilyModel(members=[
        synthetic_rep(math.exp(L), 500, theta=math.pi / 3),
        synthetic_rep(math.exp(L), 500, theta=2 * math.pi / 3),
    ])
    report = averaged_density(family, fp)
    log_c = family.members[0].log_conductor
    assert report.mean - fp.eval_hat(0.0) == pytest.approx(mertens_weighted_sum(fp, log_c, 2), abs=1e-9)
    assert report.deviation == pytest.approx(second_order_shift(fp, log_c).deviation, abs=1e-9)


def test_averaged_density_of_quarter_turns():
    fp = fejer_pair(0.5)
    family = FamilyModel(members=[synthetic_rep(math.exp(12.0), 500, theta=math.pi / 2)] * 2)
    report = averaged_density(family, fp)
    log_c = family.members[0].log_conductor
    assert report.mean - 1.0 == pytest.approx(mertens_weighted_sum(scaled(fp, 2.0), log_c, 2), abs=1e-9)


def test_averaged_density_reports_progress():
    updates = []
    tracker = ProgressTracker(run_id="fam", callback=lambda *args: updates.append(args))
    averaged_density(synthetic_family(5, 100.0, 30), fejer_pair(0.5), tracker=tracker)
    assert tracker.completed_tasks == 5
    assert updates[-1][1] == "processing"


def test_second_order_shift_converges():
    fp = fejer_pair(1.0)
    near = second_order_shift(fp, 15.0)
    far = second_order_shift(fp, 30.0)
    assert far.target == pytest.approx(0.5)
    assert abs(far.deviation) < abs(near.deviation)
    assert abs(far.deviation) <= 0.1 * fp.eval(0.0)


def test_second_order_shift_empty_window():
    shift = second_order_shift(fejer_pair(1.0), 1.0)
    assert shift.sum == 0.0
    assert shift.deviation == pytest.approx(-0.5)


def test_nonvanishing_bounds_exact():
    report = nonvanishing_bounds("2/3")
    assert report.multiplicity_bound == pytest.approx(2.0)
    assert report.multiplicity_bound_exact == "2"
    assert report.p0_lower_exact == "-1"
    assert not report.nontrivial


def test_nonvanishing_bounds_float():
    assert nonvanishing_bounds(2.0).p0_lower == 0.0
    assert not nonvanishing_bounds(2.0).nontrivial
    quarter = nonvanishing_bounds(4.0)
    assert quarter.p0_lower == pytest.approx(0.25)
    assert quarter.nontrivial
    assert quarter.multiplicity_bound_exact is None
    for T in (0.0, -1.0):
        with pytest.raises(InvalidInputError):
            nonvanishing_bounds(T)


def test_nonvanishing_bounds_monotone():
    supports = [0.5, 1.0, 2.0, 3.0, 8.0]
    bounds = [nonvanishing_bounds(T) for T in supports]
    for report in bounds:
        assert report.multiplicity_bound + report.p0_lower == pytest.approx(1.0)
    assert all(a.multiplicity_bound > b.multiplicity_bound for a, b in zip(bounds, bounds[1:]))


def test_order_bounds():
    bounds = order_bounds("2/3", 3)
    assert bounds == pytest.approx({1: 2.0, 2: 1.0, 3: 2.0 / 3.0})
    with pytest.raises(InvalidInputError):
        order_bounds(1.0, 0)


def test_vanishing_proportions():
    records = [
        ZerosRecord(conductor=10.0, ordinates=(1.0,)),
        ZerosRecord(conductor=10.0, ordinates=(2.0, -2.0)),
        ZerosRecord(conductor=10.0, ordinates=(0.0, 1.0)),
        ZerosRecord(conductor=10.0, ordinates=(0.0, 0.0)),
    ]
    report = vanishing_proportions(records, T="2/3")
    assert report.size == 4
    assert report.p0 == 0.5
    assert report.mean_order == 0.75
    assert report.proportions == {0: 0.5, 1: 0.25, 2: 0.25}
    assert report.within_bound
    assert vanishing_proportions(records).bound is None
    with pytest.raises(InvalidInputError):
        vanishing_proportions([])


def test_ramified_bound():
    assert ramified_bound(1, 1, 10.0) == 0.0
    exponent = 0.5 - 7.0 / 64.0
    expected = 0.2 * (math.log(2) / 2 ** exponent + math.log(3) / 3 ** exponent)
    assert ramified_bound(6, 1, 10.0) == pytest.approx(expected)
    with pytest.raises(InvalidInputError):
        ramified_bound(6, 1, 0.0)
