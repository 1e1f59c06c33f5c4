from typing import Optional

import numpy as np

from errors import ValidationError


def hill_tail_index(sample: np.ndarray, k: Optional[int] = None) -> float:
    """Hill estimate of the survival tail index from the top ``k`` order statistics.

    For a survival function decaying as ``tau**-alpha`` the estimate tends to
    ``alpha``; the matching density exponent is ``alpha + 1``.

    Args:
        sample: Positive observations
        k: Number of upper order statistics, defaults to ``sqrt(n)``

    Returns:
        float: Estimated tail index
    """
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    if n < 3 or np.any(x <= 0):
        raise ValidationError("Hill estimator needs at least 3 positive observations")
    if k is None:
        k = max(2, int(np.sqrt(n)))
    if not 1 <= k < n:
        raise ValidationError(f"k must lie in [1, {n - 1}], got {k}")
    logs = np.log(x[n - k:])
    h = logs.mean() - np.log(x[n - k - 1])
    return float(1.0 / h)
