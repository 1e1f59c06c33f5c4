import logging
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from config import XAConfig  # noqa: E402
from events.rng import RngHandle  # noqa: E402
from significance.meta_analysis import null_stripe  # noqa: E402
from significance.two_sample import TestMethod, TestOutcome  # noqa: E402
from xa.results import RunWarnings, conclude, summarize_age  # noqa: E402


@pytest.fixture
def rng() -> RngHandle:
    return RngHandle(20240601)


@pytest.fixture
def xa_result():
    """A 20-age, 4-trial result built from fixed p-values."""
    warnings = RunWarnings(logging.getLogger(__name__))
    stripe = null_stripe(4)
    ages = []
    for i in range(20):
        p_values = [0.05 + 0.04 * i, 0.3, 0.6, 0.9 - 0.02 * i]
        outcomes = [TestOutcome(statistic=0.1, p_value=p, method=TestMethod.KS_ASYMPTOTIC,
                                m=60, n=60, valid=True) for p in p_values]
        ages.append(summarize_age(i, 5.0 * (i + 1), outcomes, stripe, warnings))
    config = XAConfig(t_a_min=5.0, t_a_max=100.0, T_a=20, N=4, seed=7)
    return conclude(config, ages, 4, warnings)
