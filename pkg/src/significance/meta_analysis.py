"""Aggregation of repeated-test p-values.

Under the joint null every p-value is U(0, 1). Then ``-N log g`` for the
geometric mean ``g`` of N p-values is a Gamma(N, 1) sum, which gives the exact
null law of ``g`` in closed form:

    pdf(g) = N / Gamma(N) * (-N g log g)^(N - 1),    cdf(g) = Q(N, -N log g),

with Q the regularized upper incomplete gamma function.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np
from scipy import special, stats

from errors import ValidationError

logger = logging.getLogger(__name__)

P_FLOOR = 1e-300
_CDF_CLAMP = 1e-15


class Calibration(Enum):
    """Null reference of the global z statistic."""
    PAPER_LITERAL = "paper_literal"
    STRIPE_CALIBRATED = "stripe_calibrated"


@dataclass(frozen=True)
class GeoNull:
    """Null mean and standard deviation of the geometric mean of N uniforms."""
    N: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValidationError(f"N must be at least 1, got {self.N}")

    @property
    def mu0(self) -> float:
        """Get the null mean ``(1 + 1/N)^-N``."""
        return (1 + 1 / self.N) ** (-self.N)

    @property
    def sigma(self) -> float:
        """Get the null standard deviation of a single geometric mean."""
        second = (1 + 2 / self.N) ** (-self.N)
        return math.sqrt(second - self.mu0 ** 2)


def _p_array(p: Sequence[float]) -> np.ndarray:
    values = np.asarray(p, dtype=float).reshape(-1)
    if values.size == 0:
        raise ValidationError("Cannot combine an empty list of p-values")
    if np.any(np.isnan(values)) or np.any(values < 0) or np.any(values > 1):
        raise ValidationError("p-values must lie in [0, 1]")
    zeros = int(np.count_nonzero(values == 0))
    if zeros:
        logger.warning(f"Flooring {zeros} zero p-values at {P_FLOOR}")
        values = np.maximum(values, P_FLOOR)
    return values


def geometric_mean(p: Sequence[float]) -> float:
    """Geometric mean of p-values, computed in log space."""
    return float(np.exp(np.mean(np.log(_p_array(p)))))


def fisher_combine(p: Sequence[float]) -> float:
    """Fisher's combined p-value: upper chi-square(2N) tail of ``-2 sum log p``."""
    values = _p_array(p)
    statistic = -2.0 * float(np.sum(np.log(values)))
    return float(stats.chi2.sf(statistic, 2 * values.size))


def _check_g(N: int, g: float) -> None:
    if N < 1:
        raise ValidationError(f"N must be at least 1, got {N}")
    if not 0 < g < 1:
        raise ValidationError(f"Geometric mean must lie in (0, 1), got {g}")


def geo_null_pdf(N: int, g: float) -> float:
    """Null density of the geometric mean of N uniform p-values."""
    _check_g(N, g)
    s = -N * math.log(g)
    return float(stats.gamma.pdf(s, N) * N / g)


def geo_null_cdf(N: int, g: float) -> float:
    """Null probability that the geometric mean is at most ``g``."""
    _check_g(N, g)
    return float(special.gammaincc(N, -N * math.log(g)))


def geo_null_quantile(N: int, q: float) -> float:
    """Inverse of ``geo_null_cdf``."""
    if N < 1:
        raise ValidationError(f"N must be at least 1, got {N}")
    if not 0 < q < 1:
        raise ValidationError(f"Quantile level must lie in (0, 1), got {q}")
    return float(math.exp(-special.gammainccinv(N, q) / N))


def null_stripe(N: int, level: float = 0.95) -> Tuple[float, float]:
    """Central ``level`` interval of the geometric-mean null law."""
    tail = (1 - level) / 2
    return geo_null_quantile(N, tail), geo_null_quantile(N, 1 - tail)


def _reference(N: int, T_a: int, calibration: Calibration) -> Tuple[float, float]:
    """Null mean and standard error of the average of T_a geometric means."""
    if calibration is Calibration.PAPER_LITERAL:
        return math.exp(-1), math.exp(-1) / math.sqrt(N)
    null = GeoNull(N)
    return null.mu0, null.sigma / math.sqrt(T_a)


def z_statistic(g_means: Sequence[float], N: int,
                calibration: Calibration = Calibration.STRIPE_CALIBRATED) -> float:
    """Global z statistic over the per-age geometric means.

    ``paper_literal`` standardizes the average with ``e^-1`` and ``e^-1/sqrt(N)``;
    ``stripe_calibrated`` uses the exact null mean and the standard error of an
    average of ``len(g_means)`` independent geometric means, which makes the
    statistic standard normal under the null.
    """
    values = np.asarray(g_means, dtype=float).reshape(-1)
    if values.size == 0:
        raise ValidationError("z statistic needs at least one geometric mean")
    if N < 1:
        raise ValidationError(f"N must be at least 1, got {N}")
    mean, error = _reference(N, values.size, calibration)
    return float((values.mean() - mean) / error)


def power_lower_tailed(mu1: float, N: int, T_a: int, alpha: float = 0.05,
                       calibration: Calibration = Calibration.STRIPE_CALIBRATED) -> float:
    """Power of the lower-tailed z test against a mean geometric mean ``mu1``.

    Returns ``Phi((mu0 - mu1) / sigma_n - z_{1 - alpha})``.
    """
    if not 0 < mu1 < 1:
        raise ValidationError(f"mu1 must lie in (0, 1), got {mu1}")
    if not 0 < alpha < 1:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    if N < 1 or T_a < 1:
        raise ValidationError(f"N and T_a must be positive, got N={N}, T_a={T_a}")
    mean, error = _reference(N, T_a, calibration)
    return float(stats.norm.cdf((mean - mu1) / error - stats.norm.ppf(1 - alpha)))


def gaussianize(g: float, N: int, mu_y: float = 0.0, sigma_y: float = 1.0) -> float:
    """Map a geometric mean to a normal variate through its null CDF.

    ``h(g) = mu_y + sigma_y * sqrt(2) * erfinv(2 cdf(g) - 1)``, strictly
    increasing in ``g``; if g follows the null law, h(g) ~ Normal(mu_y, sigma_y^2).
    """
    if sigma_y <= 0:
        raise ValidationError(f"sigma_y must be positive, got {sigma_y}")
    cdf = min(max(geo_null_cdf(N, g), _CDF_CLAMP), 1 - _CDF_CLAMP)
    return float(mu_y + sigma_y * special.ndtri(cdf))


def mle_normal_fit(values: Sequence[float]) -> Tuple[float, float, float]:
    """Maximum-likelihood normal fit with a KS goodness-of-fit p-value.

    Returns:
        Tuple[float, float, float]: Mean, standard deviation (ddof=0), KS p-value

    Raises:
        ValidationError: If fewer than 3 values or zero variance
    """
    x = np.asarray(values, dtype=float).reshape(-1)
    if x.size < 3:
        raise ValidationError(f"Normal fit needs at least 3 values, got {x.size}")
    mean = float(x.mean())
    sd = float(x.std())
    if sd == 0:
        raise ValidationError("Normal fit of a constant sample")
    gof = stats.kstest(x, "norm", args=(mean, sd)).pvalue
    return mean, sd, float(gof)


def uniformity_p(p: Sequence[float]) -> float:
    """KS p-value of p-values against U(0, 1)."""
    values = np.asarray(p, dtype=float).reshape(-1)
    if values.size == 0:
        raise ValidationError("Uniformity check of an empty list")
    return float(stats.kstest(values, "uniform").pvalue)


def bonferroni(p: float, m: int) -> float:
    """Bonferroni-adjusted p-value for a family of ``m`` tests."""
    return min(1.0, p * m)
