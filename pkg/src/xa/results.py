import logging
import math
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Union

import numpy as np
from scipy import stats

from config import SingleConfig, XAConfig
from errors import ConfigurationError
from significance.meta_analysis import (
    Calibration,
    GeoNull,
    bonferroni,
    fisher_combine,
    geometric_mean,
    null_stripe,
    uniformity_p,
    z_statistic,
)
from significance.two_sample import TestMethod, TestOutcome, validity_check

STRIPE_LEVEL = 0.95
WHISKER_SPAN = 1.5


class RunWarnings:
    """Collects run warnings and logs each one as it is raised."""

    def __init__(self, logger: logging.Logger) -> None:
        self._logger = logger
        self._messages: List[str] = []

    def add(self, message: str) -> None:
        self._logger.warning(message)
        self._messages.append(message)

    @property
    def messages(self) -> List[str]:
        return list(self._messages)


@dataclass(frozen=True)
class BoxplotStats:
    """Five-number summary of one age's p-values.

    Whiskers reach the most extreme p-values within 1.5 IQR of the quartiles;
    the rest are counted as outliers.
    """
    q1: float
    median: float
    q3: float
    whisker_lo: float
    whisker_hi: float
    n_outliers: int

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "BoxplotStats":
        x = np.asarray(values, dtype=float)
        x = x[~np.isnan(x)]
        if x.size == 0:
            return cls(math.nan, math.nan, math.nan, math.nan, math.nan, 0)
        q1, median, q3 = np.quantile(x, [0.25, 0.5, 0.75])
        span = WHISKER_SPAN * (q3 - q1)
        inside = x[(x >= q1 - span) & (x <= q3 + span)]
        return cls(q1=float(q1), median=float(median), q3=float(q3),
                   whisker_lo=float(inside.min()), whisker_hi=float(inside.max()),
                   n_outliers=int(x.size - inside.size))


@dataclass
class AgeResult:
    """Per-age outcome of the aging test.

    Attributes:
        index: Position on the age grid
        t_a: Latency
        outcomes: One comparison per trial, None where the trial produced no aged sample
        g_p: Geometric mean of the trial p-values
        fisher_p: Fisher combined p-value
        uniformity_p: KS p-value of the trial p-values against U(0, 1)
        in_stripe: Whether g_p lies inside the null stripe
        valid: Whether the age enters the global statistic
        boxplot: Summary of the trial p-values
        adjusted_p: Bonferroni-adjusted Fisher p-value, when requested
    """
    index: int
    t_a: float
    outcomes: List[Optional[TestOutcome]] = field(repr=False)
    g_p: float
    fisher_p: float
    uniformity_p: float
    in_stripe: bool
    valid: bool
    boxplot: BoxplotStats
    adjusted_p: Optional[float] = None

    @property
    def p_values(self) -> np.ndarray:
        return np.array([math.nan if o is None else o.p_value for o in self.outcomes])


@dataclass
class XAResult:
    """Outcome of a full aging test run.

    Attributes:
        config: Configuration the run used
        ages: Per-age results in grid order
        N: Trials per age
        stripe_lo: Lower bound of the central 95% null interval of g_p
        stripe_hi: Upper bound of that interval
        mu0: Null mean of g_p
        z_g: Global z statistic over the valid ages
        reject_renewal: Final verdict
        z_reject: Verdict of the z test alone
        alpha: Significance level
        calibration: Null reference of z_g
        warnings: Warnings raised during the run
    """
    config: Union[XAConfig, SingleConfig]
    ages: List[AgeResult]
    N: int
    stripe_lo: float
    stripe_hi: float
    mu0: float
    z_g: float
    reject_renewal: bool
    z_reject: bool
    alpha: float
    calibration: Calibration
    warnings: List[str] = field(default_factory=list)

    @property
    def valid_ages(self) -> List[AgeResult]:
        return [age for age in self.ages if age.valid]

    def pooled_p_values(self) -> np.ndarray:
        """Get every trial p-value of the valid ages."""
        if not self.valid_ages:
            return np.empty(0)
        values = np.concatenate([age.p_values for age in self.valid_ages])
        return values[~np.isnan(values)]

    def summary(self) -> dict:
        """Get the key-value summary of the run."""
        return {
            "mu0": self.mu0,
            "stripe_lo": self.stripe_lo,
            "stripe_hi": self.stripe_hi,
            "z_g": self.z_g,
            "calibration": self.calibration.value,
            "reject_renewal": self.reject_renewal,
            "z_reject": self.z_reject,
            "alpha": self.alpha,
            "N": self.N,
            "valid_ages": len(self.valid_ages),
            "warnings": list(self.warnings),
        }


def _trial_usable(outcome: Optional[TestOutcome]) -> bool:
    if outcome is None:
        return False
    if outcome.method is not TestMethod.KS_ASYMPTOTIC:
        return True
    return validity_check(outcome.m, outcome.n)


def summarize_age(index: int, t_a: float, outcomes: List[Optional[TestOutcome]],
                  stripe: Sequence[float], warnings: RunWarnings) -> AgeResult:
    """Aggregate the trials of one age.

    An age is valid when every trial produced an aged sample and more than
    half of the comparisons have a usable sample size. Asymptotic KS
    comparisons are usable when mn/(m+n) > 4 and min(m, n) > 30; permutation
    p-values are usable at any size.

    Args:
        index: Position on the age grid
        t_a: Latency
        outcomes: Trial comparisons, None for failed trials
        stripe: Null stripe ``(lo, hi)``
        warnings: Sink for the invalid-age warning

    Returns:
        AgeResult: Aggregated age
    """
    p = np.array([math.nan if o is None else o.p_value for o in outcomes])
    present = p[~np.isnan(p)]
    usable = sum(_trial_usable(o) for o in outcomes)
    missing = len(outcomes) - present.size
    valid = missing == 0 and usable * 2 > len(outcomes)

    if present.size:
        g_p = geometric_mean(present)
        fisher_p = fisher_combine(present)
        uni_p = uniformity_p(present)
    else:
        g_p = fisher_p = uni_p = math.nan

    if not valid:
        warnings.add(
            f"Age {index} (t_a={t_a:.6g}) excluded: {missing} trials without aged samples, "
            f"{usable}/{len(outcomes)} comparisons with usable sample sizes"
        )
    in_stripe = bool(valid and stripe[0] <= g_p <= stripe[1])
    return AgeResult(index=index, t_a=float(t_a), outcomes=outcomes, g_p=g_p,
                     fisher_p=fisher_p, uniformity_p=uni_p, in_stripe=in_stripe,
                     valid=valid, boxplot=BoxplotStats.from_values(p))


def conclude(config: Union[XAConfig, SingleConfig], ages: List[AgeResult], N: int,
             warnings: RunWarnings, adjust: str = "none") -> XAResult:
    """Turn per-age results into the global verdict.

    ``z_g`` averages the geometric means of the valid ages; the renewal
    hypothesis is rejected when it falls below the lower ``alpha`` normal
    quantile. With ``adjust="bonferroni"`` the verdict instead rejects when any
    valid age's Fisher p-value, multiplied by the number of ages, falls below
    ``alpha``; the z verdict is still reported as ``z_reject``.

    Raises:
        ConfigurationError: If no age is valid
    """
    valid = [age for age in ages if age.valid]
    if not valid:
        raise ConfigurationError(
            "Every age is invalid: aged samples are too small, lower t_a_max or use longer sequences"
        )
    stripe_lo, stripe_hi = null_stripe(N, STRIPE_LEVEL)
    z_g = z_statistic([age.g_p for age in valid], N, config.calibration)
    z_reject = bool(z_g < stats.norm.ppf(config.alpha))

    reject = z_reject
    if adjust == "bonferroni":
        for age in ages:
            if not math.isnan(age.fisher_p):
                age.adjusted_p = bonferroni(age.fisher_p, len(ages))
        reject = any(age.adjusted_p < config.alpha for age in valid)

    return XAResult(config=config, ages=ages, N=N, stripe_lo=stripe_lo,
                    stripe_hi=stripe_hi, mu0=GeoNull(N).mu0, z_g=z_g,
                    reject_renewal=bool(reject), z_reject=z_reject, alpha=config.alpha,
                    calibration=config.calibration, warnings=warnings.messages)


def outcome_row(age: AgeResult, trial: int) -> List[Any]:
    """Get the results-table row of one trial."""
    outcome = age.outcomes[trial]
    if outcome is None:
        return [age.index, age.t_a, trial, math.nan, "none", 0, 0, False]
    return [age.index, age.t_a, trial, outcome.p_value, outcome.method.value,
            outcome.m, outcome.n, outcome.valid]
