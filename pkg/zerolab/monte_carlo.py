"""
Monte-Carlo ensembles of Haar draws

This module provides the parallel ensemble runner: per-draw statistics are
computed by a thread pool and reduced in draw-index order, so the result
depends only on the seed, never on the number of workers.
"""

import concurrent.futures
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from zerolab.configuration_service import get_configuration
from zerolab.errors import InvalidInputError
from zerolab.kernels import gue_functional, kernel, pair
from zerolab.models import GROUP_KERNELS, AngleScaling, GroupName, Statistic
from zerolab.progress_tracker import ExperimentPhase, ProgressTracker
from zerolab.rmt import HaarDrawConfig, haar_sample, one_level_density, pair_correlation
from zerolab.testfn import FourierPair

logger = logging.getLogger("zerolab.monte_carlo")


class MonteCarloResult(BaseModel):
    """Ensemble mean and standard error of one statistic."""
    model_config = ConfigDict(frozen=True)

    group: GroupName
    dim_parameter: int
    matrix_size: int
    statistic: Statistic
    scaling: AngleScaling
    seed: int
    draws: int = Field(ge=2)
    mean: float
    stderr: float = Field(ge=0)


def draw_statistic(template: HaarDrawConfig, index: int, statistic: Statistic, fp: FourierPair,
                   scaling: AngleScaling = AngleScaling.MATRIX_SIZE) -> float:
    """Statistic of draw number `index` of the ensemble described by template."""
    sample = haar_sample(template, draw_index=index)
    if statistic == Statistic.ONE_LEVEL:
        return one_level_density(sample, fp, scaling)
    return pair_correlation(sample, fp, scaling)


def _run_block(template: HaarDrawConfig, block: range, statistic: Statistic, fp: FourierPair,
               scaling: AngleScaling) -> Tuple[int, np.ndarray]:
    values = np.fromiter((draw_statistic(template, i, statistic, fp, scaling) for i in block),
                         dtype=np.float64, count=len(block))
    return block.start, values


def monte_carlo(
    template: HaarDrawConfig,
    draws: int,
    statistic: Statistic,
    fp: FourierPair,
    threads: Optional[int] = None,
    scaling: AngleScaling = AngleScaling.MATRIX_SIZE,
    tracker: Optional[ProgressTracker] = None,
) -> MonteCarloResult:
    """
    Mean and standard error of a statistic over independent Haar draws.

    Draw i uses the stream derived from (template.seed, i). Blocks of draws
    run on a thread pool; values are stored by index and reduced in index
    order.

    Args:
        template: Group, dimension parameter and master seed
        draws: Number of draws M, at least 2
        statistic: one_level or pair_corr
        fp: Test function
        threads: Worker count, capped at ZEROLAB_THREADS
        scaling: Angle normalization
        tracker: Optional progress tracker

    Returns:
        MonteCarloResult
    """
    if isinstance(draws, bool) or not isinstance(draws, int) or draws < 2:
        raise InvalidInputError(f"draws must be an integer >= 2, got {draws!r}")
    statistic = Statistic(statistic)
    threads = get_configuration().get_thread_count(threads)

    block_size = max(1, math.ceil(draws / (threads * 8)))
    blocks: List[range] = [range(start, min(start + block_size, draws)) for start in range(0, draws, block_size)]
    values = np.empty(draws, dtype=np.float64)

    logger.info("running %d draws of %s(N=%d) on %d threads", draws, template.group.value,
                template.dim_parameter, threads)
    if tracker:
        tracker.start_sampling(draws, f"Sampling {template.group.value}({template.matrix_size})")

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
        futures = [executor.submit(_run_block, template, block, statistic, fp, scaling) for block in blocks]
        for future in concurrent.futures.as_completed(futures):
            start, block_values = future.result()
            values[start:start + block_values.size] = block_values
            if tracker:
                tracker.advance(block_values.size)

    if tracker:
        tracker.update_progress(ExperimentPhase.REDUCTION, "Reducing draws", 0)
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(draws))

    return MonteCarloResult(
        group=template.group,
        dim_parameter=template.dim_parameter,
        matrix_size=template.matrix_size,
        statistic=statistic,
        scaling=scaling,
        seed=template.seed,
        draws=draws,
        mean=mean,
        stderr=stderr,
    )


def ensemble_target(group: GroupName, statistic: Statistic, fp: FourierPair) -> float:
    """Limiting value of an ensemble mean: the kernel pairing, or the GUE functional for pair correlation."""
    if Statistic(statistic) == Statistic.PAIR_CORR:
        return gue_functional(fp)
    return pair(kernel(GROUP_KERNELS[GroupName(group)]), fp)
