"""Exact aging test over many independent realizations."""
import logging
from typing import Optional, Sequence

from aging.aging import AgingMode, age_interarrivals, shuffled_aged
from config import XAConfig
from errors import ConfigurationError, EmptySampleError
from events.rng import RngHandle
from events.sequences import InterArrivalSequence
from significance.meta_analysis import null_stripe
from significance.two_sample import TestOutcome, two_sample_test
from .grid import run_grid
from .pair_sources import PairSource, SamplePairSource
from .results import STRIPE_LEVEL, RunWarnings, XAResult, conclude, summarize_age

logger = logging.getLogger(__name__)

MIN_EVENTS = 100
# Aged samples left at the largest age under the default rule, also the KS size floor
AGED_PER_WINDOW = 30
MIN_EXPECTED_AGED = 9
P01_MULTIPLE = 2.0


def expected_aged_count(L: int, mean_tau: float, t_a: float) -> float:
    """Sequential aged samples expected from L waiting times at latency t_a."""
    return L * mean_tau / (t_a + mean_tau)


def default_config(L: int, mean_tau: float, p01: Optional[float] = None,
                   t_a_max: Optional[float] = None, warnings: Optional[RunWarnings] = None,
                   **overrides) -> XAConfig:
    """Derive the age grid from the size of a realization.

    ``t_a_max`` is the smaller of ``L * mean_tau / 30`` and ``L / 30``, so
    that about 30 aged samples remain at the largest age and a mean inflated
    by rare long waits cannot push the grid past the memory of the process.
    The grid step is ``t_a_max / T_a`` and the first age is the larger of one
    step and a small multiple of the 1st-percentile waiting time.

    Args:
        L: Waiting times per realization
        mean_tau: Mean waiting time
        p01: 1st percentile of the waiting times
        t_a_max: Largest latency; the rule above when None
        warnings: Sink for the sample-size warning
        overrides: Other ``XAConfig`` fields

    Returns:
        XAConfig: Validated configuration

    Raises:
        ConfigurationError: If the realizations are too short for any usable age
    """
    if L < MIN_EVENTS:
        raise ConfigurationError(f"Need at least {MIN_EVENTS} waiting times per realization, got {L}")
    if not mean_tau > 0:
        raise ConfigurationError(f"Mean waiting time must be positive, got {mean_tau}")
    if t_a_max is None:
        t_a_max = L * min(mean_tau, 1.0) / AGED_PER_WINDOW
    expected = expected_aged_count(L, mean_tau, t_a_max)
    if expected < AGED_PER_WINDOW:
        (warnings or RunWarnings(logger)).add(
            f"About {expected:.1f} aged samples expected at t_a_max={t_a_max:.6g}: the largest "
            f"ages may miss the {AGED_PER_WINDOW}-sample validity threshold"
        )
    T_a = overrides.pop("T_a", 20)
    t_a_min = overrides.pop("t_a_min", None)
    if t_a_min is None:
        t_a_min = t_a_max / T_a
        if p01 is not None:
            t_a_min = max(t_a_min, P01_MULTIPLE * p01)
    if t_a_min >= t_a_max:
        raise ConfigurationError(
            f"No usable age: t_a_min={t_a_min:.6g} is not below t_a_max={t_a_max:.6g}"
        )
    if expected_aged_count(L, mean_tau, t_a_min) < MIN_EXPECTED_AGED:
        raise ConfigurationError(
            f"Realizations of {L} waiting times leave fewer than {MIN_EXPECTED_AGED} "
            f"aged samples even at t_a={t_a_min:.6g}"
        )
    config = XAConfig(t_a_min=t_a_min, t_a_max=t_a_max, T_a=T_a, **overrides)
    config.validate()
    return config


def compare_aged(a: InterArrivalSequence, b: InterArrivalSequence, t_a: float, rng: RngHandle,
                 method: str, s_max: int, mode: AgingMode) -> Optional[TestOutcome]:
    """Compare A aged with the shuffled-and-aged waiting times of B.

    Returns None when either side has no aged sample.
    """
    if len(a) == 0 or len(b) == 0:
        return None
    try:
        aged_a = age_interarrivals(a, t_a, mode)
        aged_b = shuffled_aged(b, t_a, rng.child(2), mode)
    except EmptySampleError:
        return None
    return two_sample_test(aged_a.taus, aged_b.taus, method, rng.child(3), s_max)


def run_exact(pair_source: PairSource, config: XAConfig,
              warnings: Optional[RunWarnings] = None) -> XAResult:
    """Run the exact aging test.

    Every (age, trial) cell draws its own pair of realizations from stream
    ``(age_index, trial_index)``, ages A as observed and B after shuffling its
    waiting times, and compares the two aged samples.

    Args:
        pair_source: Produces the realization pair of a cell
        config: Run configuration
        warnings: Warnings collected before the run

    Returns:
        XAResult: Per-age results and the global verdict

    Raises:
        ConfigurationError: If the configuration is invalid or every age is invalid
    """
    config.validate()
    warnings = warnings or RunWarnings(logger)
    if config.mode is AgingMode.PER_EVENT:
        warnings.add("Per-event aging overlaps windows: aged samples are dependent")
    ages = config.age_grid()
    logger.info(
        f"Exact aging test: {config.T_a} ages in [{config.t_a_min:.6g}, {config.t_a_max:.6g}], "
        f"N={config.N}, method={config.method}, seed={config.seed}"
    )

    def cell(i: int, j: int) -> Optional[TestOutcome]:
        rng = RngHandle(config.seed, (i, j))
        a, b = pair_source(i, j, rng)
        return compare_aged(a, b, ages[i], rng, config.method, config.s_max, config.mode)

    outcomes = run_grid(config.T_a, config.N, cell, config.workers)
    stripe = null_stripe(config.N, STRIPE_LEVEL)
    results = [summarize_age(i, ages[i], outcomes[i], stripe, warnings)
               for i in range(config.T_a)]
    result = conclude(config, results, config.N, warnings)
    logger.info(f"z_g={result.z_g:.4f}, reject_renewal={result.reject_renewal}")
    return result


def run_exact_on_samples(realizations: Sequence[InterArrivalSequence], config: XAConfig,
                         warnings: Optional[RunWarnings] = None) -> XAResult:
    """Run the exact aging test on the waiting times of recorded realizations.

    Trials pair distinct realizations; no realization is used twice within an age.

    Raises:
        ConfigurationError: If there are fewer than 2N realizations
    """
    warnings = warnings or RunWarnings(logger)
    source = SamplePairSource(realizations, config.N, config.seed)
    duplicates = source.duplicate_count()
    if duplicates:
        warnings.add(
            f"{duplicates} realizations are identical to another one: "
            f"pairs are not independent"
        )
    source.prepare(config.T_a)
    return run_exact(source, config, warnings)

