"""Approximate aging test for a single observed sequence.

The sequence is cut into non-overlapping windows of ``t_w`` waiting times.
Window i plays realization A of trial i; realization B is a bootstrap draw of
``t_w`` waiting times from the whole observation, which is renewal by
construction. Windows of one realization are not fully independent, so every
run carries a dependence warning and Bonferroni adjustment is available.
"""
import dataclasses
import logging
from typing import List, Optional, Tuple

import numpy as np

from aging.aging import AgingMode, age_interarrivals
from config import SingleConfig
from errors import ConfigurationError, EmptySampleError
from events.rng import RngHandle
from events.sequences import InterArrivalSequence
from significance.meta_analysis import null_stripe
from significance.two_sample import TestOutcome, two_sample_test
from .grid import run_grid
from .results import STRIPE_LEVEL, RunWarnings, XAResult, conclude, summarize_age

logger = logging.getLogger(__name__)

MIN_WINDOWS = 2
# Aged samples a window of t_w waiting times should still hold at t_a_max
AGED_PER_WINDOW = 10
AGED_PER_SEQUENCE = 30
MIN_AGED_AT_T_A_MIN = 5
MIN_TAU_SPACING = 10.0


def split_windows(taus: InterArrivalSequence, t_w: int,
                  warnings: Optional[RunWarnings] = None) -> List[InterArrivalSequence]:
    """Cut the waiting times into ``floor(L / t_w)`` consecutive blocks of ``t_w``.

    Raises:
        ConfigurationError: If fewer than two windows fit
    """
    L = len(taus)
    if t_w < 1 or L < MIN_WINDOWS * t_w:
        raise ConfigurationError(
            f"Need at least {MIN_WINDOWS} windows of t_w={t_w} waiting times, got L={L}"
        )
    n_windows = L // t_w
    remainder = L - n_windows * t_w
    if remainder:
        (warnings or RunWarnings(logger)).add(
            f"Discarded the last {remainder} waiting times that do not fill a window"
        )
    values = taus.taus
    return [InterArrivalSequence(values[k * t_w:(k + 1) * t_w]) for k in range(n_windows)]


def bootstrap_sample(taus: InterArrivalSequence, size: int, rng: RngHandle) -> InterArrivalSequence:
    """Draw ``size`` waiting times with replacement from the observed ones."""
    return InterArrivalSequence(rng.generator().choice(taus.taus, size=size, replace=True))


def derive_ages(taus: InterArrivalSequence, config: SingleConfig) -> Tuple[float, float]:
    """Resolve the latency range of a single-realization run.

    ``t_a_max`` defaults to ``min(L <tau> / 30, t_w <tau> / 10)`` and ``t_a_min``
    to the grid step ``t_a_max / T_a``.

    Raises:
        ConfigurationError: If the step is below ten times the shortest waiting
            time or windows are too short to be aged at ``t_a_min``
    """
    L = len(taus)
    mean_tau = taus.mean()
    t_a_max = config.t_a_max
    if t_a_max is None:
        t_a_max = min(L * mean_tau / AGED_PER_SEQUENCE, config.t_w * mean_tau / AGED_PER_WINDOW)
    step = t_a_max / config.T_a
    t_a_min = step if config.t_a_min is None else config.t_a_min
    if not 0 <= t_a_min < t_a_max:
        raise ConfigurationError(f"Need 0 <= t_a_min < t_a_max, got {t_a_min:.6g}, {t_a_max:.6g}")

    shortest = float(taus.taus.min())
    if step < MIN_TAU_SPACING * shortest:
        raise ConfigurationError(
            f"Age step {step:.6g} must be at least {MIN_TAU_SPACING:g} times the shortest "
            f"waiting time {shortest:.6g}"
        )
    expected = config.t_w * mean_tau / (t_a_min + mean_tau)
    if expected < MIN_AGED_AT_T_A_MIN:
        raise ConfigurationError(
            f"Windows of t_w={config.t_w} hold about {expected:.1f} aged samples at "
            f"t_a={t_a_min:.6g}, need {MIN_AGED_AT_T_A_MIN}"
        )
    return t_a_min, t_a_max


def run_single(taus: InterArrivalSequence, config: SingleConfig) -> XAResult:
    """Run the single-realization aging test.

    Args:
        taus: Observed waiting times
        config: Run configuration

    Returns:
        XAResult: Per-age results and the global verdict; ``config`` carries
            the resolved latency range

    Raises:
        ConfigurationError: If the configuration does not fit the data or every age is invalid
    """
    config.validate()
    warnings = RunWarnings(logger)
    windows = split_windows(taus, config.t_w, warnings)
    t_a_min, t_a_max = derive_ages(taus, config)
    config = dataclasses.replace(config, t_a_min=t_a_min, t_a_max=t_a_max)
    N = len(windows)
    ages = np.linspace(t_a_min, t_a_max, config.T_a)
    warnings.add(
        f"Windows of one realization are not fully independent: the {N} trials per age "
        f"are dependent; consider --adjust bonferroni"
    )
    if config.mode is AgingMode.PER_EVENT:
        warnings.add("Per-event aging overlaps windows: aged samples are dependent")
    logger.info(
        f"Single-realization aging test: {N} windows of {config.t_w}, {config.T_a} ages in "
        f"[{t_a_min:.6g}, {t_a_max:.6g}], method={config.method}, seed={config.seed}"
    )

    def cell(i: int, j: int) -> Optional[TestOutcome]:
        rng = RngHandle(config.seed, (i, j))
        baseline = bootstrap_sample(taus, config.t_w, rng.child(1))
        try:
            aged_a = age_interarrivals(windows[j], ages[i], config.mode)
            aged_b = age_interarrivals(baseline, ages[i], config.mode)
        except EmptySampleError:
            return None
        return two_sample_test(aged_a.taus, aged_b.taus, config.method, rng.child(3), config.s_max)

    outcomes = run_grid(config.T_a, N, cell, config.workers)
    stripe = null_stripe(N, STRIPE_LEVEL)
    results = [summarize_age(i, ages[i], outcomes[i], stripe, warnings)
               for i in range(config.T_a)]
    result = conclude(config, results, N, warnings, adjust=config.adjust)
    logger.info(
        f"z_g={result.z_g:.4f}, z_reject={result.z_reject}, "
        f"reject_renewal={result.reject_renewal} (adjust={config.adjust})"
    )
    return result
