import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy import special

from errors import ValidationError
from events.rng import RngHandle

DEFAULT_S_MAX = 1000
MIN_S_MAX = 100
_PERMUTATION_BATCH = 1000


class TestMethod(Enum):
    """How a two-sample p-value was obtained."""
    KS_ASYMPTOTIC = "ks_asymptotic"
    PERMUTATION_EXACT = "permutation_exact"
    PERMUTATION_MONTE_CARLO = "permutation_monte_carlo"


TestMethod.__test__ = False  # not a pytest class


@dataclass(frozen=True)
class TestOutcome:
    """Result of one two-sample comparison.

    Attributes:
        statistic: KS distance between the empirical CDFs
        p_value: Two-sided p-value
        method: Procedure that produced the p-value
        m: Size of sample A
        n: Size of sample B
        valid: Whether the asymptotic KS conditions hold for (m, n)
    """
    __test__ = False

    statistic: float
    p_value: float
    method: TestMethod
    m: int
    n: int
    valid: bool


def _as_sample(values, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float).reshape(-1)
    if array.size == 0:
        raise ValidationError(f"Sample {name} is empty")
    if np.any(np.isnan(array)):
        raise ValidationError(f"Sample {name} contains NaN")
    return array


class _PooledOrder:
    """Sorted pooled sample with the end positions of its tie groups.

    Statistics are evaluated from integer label counts, ``|n*cA - m*cB|``, so
    rearrangements that tie the observed split compare exactly.
    """

    def __init__(self, a: np.ndarray, b: np.ndarray) -> None:
        self.m = a.size
        self.n = b.size
        pooled = np.concatenate((a, b))
        self.order = np.argsort(pooled, kind="stable")
        ordered = pooled[self.order]
        self.tie_ends = np.flatnonzero(np.append(ordered[1:] != ordered[:-1], True))
        self.observed_labels = self.order < self.m

    def scaled_distances(self, labels: np.ndarray) -> np.ndarray:
        """Integer ``m*n*D`` for each row of a boolean label matrix (True = sample A)."""
        labels = np.atleast_2d(labels)
        count_a = np.cumsum(labels, axis=1, dtype=np.int64)[:, self.tie_ends]
        positions = self.tie_ends + 1
        count_b = positions - count_a
        return np.abs(self.n * count_a - self.m * count_b).max(axis=1)


def ks_statistic(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov distance ``sup |T_m(z) - S_n(z)|``.

    Empirical CDFs are compared only after all tied pooled values are consumed.

    Raises:
        ValidationError: If either sample is empty
    """
    pooled = _PooledOrder(_as_sample(a, "a"), _as_sample(b, "b"))
    scaled = pooled.scaled_distances(pooled.observed_labels)[0]
    return float(scaled) / (pooled.m * pooled.n)


def kolmogorov_cdf(z: float) -> float:
    """Limiting Kolmogorov distribution ``Q(z) = 1 - 2 sum (-1)^(i-1) exp(-2 i^2 z^2)``."""
    if z <= 0:
        return 0.0
    return float(1.0 - special.kolmogorov(z))


def validity_check(m: int, n: int) -> bool:
    """Sample-size conditions for the asymptotic KS p-value: mn/(m+n) > 4 and min > 30."""
    if m <= 0 or n <= 0:
        return False
    return m * n / (m + n) > 4 and min(m, n) > 30


def ks_p_value(d_obs: float, m: int, n: int) -> TestOutcome:
    """Asymptotic p-value of an observed KS distance.

    Uses the Stephens correction ``lambda = (sqrt(Ne) + 0.12 + 0.11/sqrt(Ne)) * d``
    with effective size ``Ne = mn/(m+n)``.

    Raises:
        ValidationError: If ``d_obs`` is outside [0, 1] or a size is not positive
    """
    if not 0.0 <= d_obs <= 1.0:
        raise ValidationError(f"KS distance must lie in [0, 1], got {d_obs}")
    if m < 1 or n < 1:
        raise ValidationError(f"Sample sizes must be positive, got m={m}, n={n}")
    effective = math.sqrt(m * n / (m + n))
    lam = (effective + 0.12 + 0.11 / effective) * d_obs
    p_value = min(1.0, max(0.0, float(special.kolmogorov(lam))))
    return TestOutcome(statistic=float(d_obs), p_value=p_value,
                       method=TestMethod.KS_ASYMPTOTIC, m=m, n=n,
                       valid=validity_check(m, n))


def ks_critical_value(alpha: float, m: int, n: int) -> float:
    """KS distance above which equality is rejected at level ``alpha``."""
    if not 0 < alpha < 1:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    c_alpha = math.sqrt(-0.5 * math.log(alpha / 2))
    return c_alpha * math.sqrt((m + n) / (m * n))


def ks_test(a, b) -> TestOutcome:
    """KS distance of two samples with its asymptotic p-value."""
    a, b = _as_sample(a, "a"), _as_sample(b, "b")
    return ks_p_value(ks_statistic(a, b), a.size, b.size)


def permutation_test(a, b, rng: RngHandle, s_max: int = DEFAULT_S_MAX) -> TestOutcome:
    """Permutation p-value of the KS distance.

    All label rearrangements are enumerated when there are at most ``s_max``;
    otherwise ``s_max`` random rearrangements are drawn from ``rng``. The
    p-value is ``(1 + #{D >= D_obs}) / (1 + #rearrangements)``.

    Raises:
        ValidationError: If a sample is empty or ``s_max`` below 100
    """
    a, b = _as_sample(a, "a"), _as_sample(b, "b")
    if s_max < MIN_S_MAX:
        raise ValidationError(f"Permutation budget must be at least {MIN_S_MAX}, got {s_max}")
    pooled = _PooledOrder(a, b)
    m, n = pooled.m, pooled.n
    observed = pooled.scaled_distances(pooled.observed_labels)[0]

    total = math.comb(m + n, m)
    if total <= s_max:
        method = TestMethod.PERMUTATION_EXACT
        combos = np.array(list(itertools.combinations(range(m + n), m)), dtype=np.int64)
        labels = np.zeros((total, m + n), dtype=bool)
        labels[np.arange(total)[:, None], combos] = True
        exceed = int(np.count_nonzero(pooled.scaled_distances(labels) >= observed))
        draws = total
    else:
        method = TestMethod.PERMUTATION_MONTE_CARLO
        generator = rng.generator()
        base = np.zeros(m + n, dtype=bool)
        base[:m] = True
        exceed = 0
        remaining = s_max
        while remaining:
            batch = min(remaining, _PERMUTATION_BATCH)
            labels = generator.permuted(np.tile(base, (batch, 1)), axis=1)
            exceed += int(np.count_nonzero(pooled.scaled_distances(labels) >= observed))
            remaining -= batch
        draws = s_max

    return TestOutcome(statistic=float(observed) / (m * n),
                       p_value=(1 + exceed) / (1 + draws), method=method, m=m, n=n,
                       valid=validity_check(m, n))


def two_sample_test(a, b, method: str = "ks", rng: Optional[RngHandle] = None,
                    s_max: int = DEFAULT_S_MAX) -> TestOutcome:
    """Run the configured two-sample test.

    Args:
        a: Sample A
        b: Sample B
        method: ``ks``, ``permutation``, or ``auto`` (KS when the validity
            conditions hold, permutation otherwise)
        rng: Randomness for Monte Carlo permutations
        s_max: Permutation budget

    Returns:
        TestOutcome: Comparison result
    """
    if method == "ks":
        return ks_test(a, b)
    if method == "auto":
        if validity_check(np.size(a), np.size(b)):
            return ks_test(a, b)
        method = "permutation"
    if method == "permutation":
        if rng is None:
            raise ValidationError("Permutation test needs an RngHandle")
        return permutation_test(a, b, rng, s_max)
    raise ValidationError(f"Unknown two-sample method: {method}")
