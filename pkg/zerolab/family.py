"""
Family statistics

This module provides the old/new-form sieve on divisor lattices, averaged
one-level densities over families of representations, the second-order
prime-square shift and the non-vanishing bounds that follow from a test
function's support.
"""

import concurrent.futures
import logging
import math
from collections import Counter
from functools import lru_cache
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import divisors, factorint

from zerolab.arith import mertens_weighted_sum, prime_divisor_power_sum
from zerolab.configuration_service import get_configuration
from zerolab.errors import InvalidInputError
from zerolab.lfun import RAMANUJAN_EXPONENT, AutoRep, ZerosRecord, central_order, explicit_formula_density, synthetic_rep
from zerolab.models import ThetaMeasure
from zerolab.progress_tracker import ExperimentPhase, ProgressTracker
from zerolab.testfn import FourierPair, parse_support

logger = logging.getLogger("zerolab.family")

Number = Union[int, float, Fraction]


class FamilyModel(BaseModel):
    """Finite family of representations sharing a prime horizon."""
    model_config = ConfigDict(frozen=True)

    label: str = Field(default="family", description="Family label")
    members: List[AutoRep] = Field(description="Members, in order")

    @field_validator("members")
    @classmethod
    def validate_members(cls, v):
        if not v:
            raise ValueError("a family needs at least one member")
        horizons = {rep.horizon for rep in v}
        if len(horizons) > 1:
            raise ValueError(f"members must share one prime horizon, got {sorted(horizons)}")
        return v

    @property
    def horizon(self) -> int:
        return self.members[0].horizon


@lru_cache(maxsize=None)
def lambda2(n: int) -> int:
    """(mobius * mobius)(n): multiplicative with -2, 1, 0 at p, p^2, p^k (k >= 3)."""
    value = 1
    for exponent in factorint(n).values():
        value *= (-2, 1)[exponent - 1] if exponent <= 2 else 0
    return value


@lru_cache(maxsize=None)
def divisor_lattice(n: int) -> Tuple[int, ...]:
    """Ascending divisors of n."""
    return tuple(divisors(n))


def _check_divisor_map(q: int, values: Mapping[int, Number], name: str) -> Tuple[int, ...]:
    if isinstance(q, bool) or not isinstance(q, int) or q < 1:
        raise InvalidInputError(f"q must be a positive integer, got {q!r}")
    lattice = divisor_lattice(q)
    missing = [d for d in lattice if d not in values]
    if missing:
        raise InvalidInputError(f"{name} sums missing divisors {missing[:5]} of {q}")
    extra = sorted(set(values) - set(lattice))
    if extra:
        raise InvalidInputError(f"{name} sums given at non-divisors {extra[:5]} of {q}")
    return lattice


def sieve_new_from_old(q: int, old: Mapping[int, Number]) -> Dict[int, Number]:
    """
    Newform sums from oldform sums on the divisors of q.

    new(d) = sum over e | d of lambda2(d/e) old(e). Integer and Fraction
    inputs stay exact.

    Args:
        q: Level
        old: Value at every divisor of q

    Returns:
        Value at every divisor of q

    Raises:
        InvalidInputError: a divisor is missing or a key is not a divisor
    """
    lattice = _check_divisor_map(q, old, "old")
    return {d: sum(lambda2(d // e) * old[e] for e in divisor_lattice(d)) for d in lattice}


def sieve_old_from_new(q: int, new: Mapping[int, Number]) -> Dict[int, Number]:
    """Oldform sums from newform sums: old(d) = sum over e | d of tau2(d/e) new(e)."""
    lattice = _check_divisor_map(q, new, "new")
    return {d: sum(len(divisor_lattice(d // e)) * new[e] for e in divisor_lattice(d)) for d in lattice}


class SievedSums(BaseModel):
    """Old and new spectral sums on the divisor lattice of q."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    modulus: int = Field(ge=1, description="Level q")
    old_sums: Dict[int, Number] = Field(description="d -> old sum")
    new_sums: Dict[int, Number] = Field(description="d -> new sum")

    @classmethod
    def from_old(cls, q: int, old: Mapping[int, Number]) -> "SievedSums":
        return cls(modulus=q, old_sums=dict(old), new_sums=sieve_new_from_old(q, old))

    def round_trip_exact(self) -> bool:
        """Whether tau2-convolving the new sums gives back the old sums."""
        return sieve_old_from_new(self.modulus, self.new_sums) == self.old_sums


class AveragedDensityReport(BaseModel):
    """Family average of explicit-formula densities."""
    model_config = ConfigDict(frozen=True)

    label: str = Field(description="Family label")
    family_tag: str = Field(description="Test function label")
    nu_max: int = Field(description="Largest prime-power block")
    mean: float = Field(description="Mean density over members")
    per_rep: List[float] = Field(description="Density of each member, in family order")
    predicted: float = Field(description="phi_hat(0) + phi(0)/2")
    deviation: float = Field(description="mean - predicted")
    tail_bound: float = Field(ge=0, description="Majorant of the omitted prime-power blocks")


def averaged_density(
    family: FamilyModel,
    fp: FourierPair,
    nu_max: int = 2,
    threads: Optional[int] = None,
    tracker: Optional[ProgressTracker] = None,
) -> AveragedDensityReport:
    """
    Average the one-level density over a family.

    Members run on a thread pool and are reduced in family order. The
    orthogonal value phi_hat(0) + phi(0)/2 is reported as a reference,
    synthetic families need not reach it.

    Args:
        family: Members to average over
        fp: Test function
        nu_max: Largest prime-power block, at least 2
        threads: Worker count, capped at ZEROLAB_THREADS
        tracker: Optional progress tracker

    Returns:
        AveragedDensityReport

    Raises:
        HorizonError: the family horizon is below the prime window of a member
    """
    threads = get_configuration().get_thread_count(threads)
    members = family.members
    results = [None] * len(members)
    if tracker:
        tracker.start_sampling(len(members), f"Summing primes for {len(members)} members")

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
        futures = {executor.submit(explicit_formula_density, rep, fp, nu_max): i for i, rep in enumerate(members)}
        for future in concurrent.futures.as_completed(futures):
            results[futures[future]] = future.result()
            if tracker:
                tracker.advance()

    if tracker:
        tracker.update_progress(ExperimentPhase.REDUCTION, "Averaging members", 0)
    per_rep = [r.value for r in results]
    mean = math.fsum(per_rep) / len(per_rep)
    predicted = fp.eval_hat(0.0) + 0.5 * fp.eval(0.0)
    logger.info("family %s: mean %.6f, predicted %.6f", family.label, mean, predicted)
    return AveragedDensityReport(
        label=family.label,
        family_tag=fp.family_tag,
        nu_max=nu_max,
        mean=mean,
        per_rep=per_rep,
        predicted=predicted,
        deviation=mean - predicted,
        tail_bound=max(r.tail_bound for r in results),
    )


class SecondOrderShift(BaseModel):
    """Prime-square sum against its limit phi(0)/2."""
    model_config = ConfigDict(frozen=True)

    log_c: float = Field(gt=0, description="Logarithm of the conductor")
    sum: float = Field(description="Mertens-weighted prime-square sum")
    target: float = Field(description="phi(0)/2")
    deviation: float = Field(description="sum - target")


def second_order_shift(fp: FourierPair, log_c: float) -> SecondOrderShift:
    """Mertens sum over prime squares and its distance to phi(0)/2."""
    total = mertens_weighted_sum(fp, log_c, 2)
    target = 0.5 * fp.eval(0.0)
    return SecondOrderShift(log_c=log_c, sum=total, target=target, deviation=total - target)


class NonvanishingReport(BaseModel):
    """
    Bounds on central vanishing implied by a support radius.

    multiplicity_bound bounds the mean vanishing order sum m p_m and
    p0_lower bounds the proportion of non-vanishing members. The exact
    fields hold the rational values when T is rational.
    """
    model_config = ConfigDict(frozen=True)

    support: str = Field(description="Support radius T as given")
    multiplicity_bound: float = Field(description="1/2 + 1/T")
    p0_lower: float = Field(description="1/2 - 1/T")
    nontrivial: bool = Field(description="p0_lower > 0, i.e. T > 2")
    multiplicity_bound_exact: Optional[str] = Field(default=None, description="Exact 1/2 + 1/T")
    p0_lower_exact: Optional[str] = Field(default=None, description="Exact 1/2 - 1/T")


def nonvanishing_bounds(T: Union[str, float, Fraction]) -> NonvanishingReport:
    """
    Non-vanishing bounds for a test function supported in [-T, T].

    Args:
        T: Positive support radius; "a/b" strings and Fractions stay exact

    Returns:
        NonvanishingReport

    Raises:
        InvalidInputError: T <= 0
    """
    support = parse_support(T)
    if isinstance(support, Fraction):
        bound = Fraction(1, 2) + 1 / support
        lower = Fraction(1, 2) - 1 / support
        return NonvanishingReport(
            support=str(support),
            multiplicity_bound=float(bound),
            p0_lower=float(lower),
            nontrivial=lower > 0,
            multiplicity_bound_exact=str(bound),
            p0_lower_exact=str(lower),
        )
    return NonvanishingReport(
        support=repr(float(support)),
        multiplicity_bound=0.5 + 1.0 / support,
        p0_lower=0.5 - 1.0 / support,
        nontrivial=support > 2,
    )


def order_bounds(T: Union[str, float, Fraction], m_max: int) -> Dict[int, float]:
    """Upper bounds p_m <= (1/2 + 1/T)/m for m = 1..m_max."""
    if m_max < 1:
        raise InvalidInputError(f"m_max must be at least 1, got {m_max}")
    bound = nonvanishing_bounds(T).multiplicity_bound
    return {m: bound / m for m in range(1, m_max + 1)}


class VanishingProportions(BaseModel):
    """Empirical distribution of central vanishing orders."""
    model_config = ConfigDict(frozen=True)

    size: int = Field(ge=1, description="Number of records")
    proportions: Dict[int, float] = Field(description="m -> p_m")
    mean_order: float = Field(description="sum of m p_m")
    p0: float = Field(description="Proportion with no central zero")
    bound: Optional[float] = Field(default=None, description="1/2 + 1/T when a support is given")
    within_bound: Optional[bool] = Field(default=None, description="mean_order <= bound")


def vanishing_proportions(records: Sequence[ZerosRecord], T: Optional[Union[str, float, Fraction]] = None,
                          tol: float = 1e-9) -> VanishingProportions:
    """
    Proportions p_m of records whose central order is m.

    Args:
        records: Zeros records, at least one
        T: Optional support radius to compare sum m p_m against 1/2 + 1/T
        tol: Distance to the central point counted as a central zero
    """
    if not records:
        raise InvalidInputError("vanishing proportions need at least one record")
    counts = Counter(central_order(z, tol) for z in records)
    size = len(records)
    proportions = {m: counts[m] / size for m in sorted(counts)}
    mean_order = math.fsum(m * c for m, c in counts.items()) / size
    bound = None if T is None else nonvanishing_bounds(T).multiplicity_bound
    return VanishingProportions(
        size=size,
        proportions=proportions,
        mean_order=mean_order,
        p0=proportions.get(0, 0.0),
        bound=bound,
        within_bound=None if bound is None else mean_order <= bound,
    )


def synthetic_family(
    size: int,
    conductor: float,
    horizon: int,
    measure: ThetaMeasure = ThetaMeasure.SATO_TATE,
    seed: int = 0,
    arithmetic_conductor: int = 1,
    label: Optional[str] = None,
) -> FamilyModel:
    """
    Family of independent synthetic representations.

    Member i draws its angles from stream i of the seed; root numbers
    alternate +1, -1 so the family is root-number balanced.
    """
    if size < 1:
        raise InvalidInputError(f"family size must be at least 1, got {size}")
    members = [
        synthetic_rep(
            conductor,
            horizon,
            arithmetic_conductor=arithmetic_conductor,
            measure=measure,
            seed=seed,
            root_number=1 if i % 2 == 0 else -1,
            draw_index=i,
        )
        for i in range(size)
    ]
    return FamilyModel(label=label or f"synthetic-{ThetaMeasure(measure).value}-{seed}", members=members)


def ramified_bound(q: int, nu: int, log_c: float) -> float:
    """(2/log c) times the sum of log p / p^(nu (1/2 - 7/64)) over primes p | q."""
    if not log_c > 0:
        raise InvalidInputError(f"log_c must be positive, got {log_c}")
    if nu < 1:
        raise InvalidInputError(f"nu must be positive, got {nu}")
    return 2.0 / log_c * prime_divisor_power_sum(q, nu * (0.5 - RAMANUJAN_EXPONENT))


def sieve_round_trip(q: int, values: Mapping[int, Number]) -> bool:
    """Whether both sieve directions invert each other on values, exactly."""
    values = dict(values)
    return (
        sieve_old_from_new(q, sieve_new_from_old(q, values)) == values
        and sieve_new_from_old(q, sieve_old_from_new(q, values)) == values
    )
