from dataclasses import dataclass

import numpy as np
from scipy import signal

from errors import ValidationError


@dataclass(frozen=True)
class AcfResult:
    """Sample autocorrelations at lags 0..max_lag and the 95% white-noise bound."""
    values: np.ndarray
    bound: float

    def outside_bound(self) -> np.ndarray:
        """Get the lags >= 1 whose autocorrelation leaves the band."""
        return np.flatnonzero(np.abs(self.values[1:]) > self.bound) + 1


def acf(series, max_lag: int) -> AcfResult:
    """Biased-normalized sample autocorrelation function.

    ``r_k = sum_t d_t d_{t+k} / sum_t d_t^2`` with ``d`` the demeaned series;
    the bound is ``1.96 / sqrt(n)``.

    Raises:
        ValidationError: If the series is too short or constant
    """
    x = np.asarray(series, dtype=float).reshape(-1)
    n = x.size
    if not 1 <= max_lag < n:
        raise ValidationError(f"Need 1 <= max_lag < length, got max_lag={max_lag}, n={n}")
    d = x - x.mean()
    if not np.any(d):
        raise ValidationError("Autocorrelation of a constant series is undefined")
    full = signal.correlate(d, d, mode="full", method="fft")
    lags = full[n - 1:n + max_lag]
    values = lags / lags[0]
    return AcfResult(values=values, bound=1.96 / np.sqrt(n))
