import numpy as np
import pytest

from errors import ValidationError
from events.rng import RngHandle
from generators.acf import acf
from generators.processes import stationary_ar1


def test_lag_zero_is_one():
    result = acf([1.0, 3.0, 2.0, 5.0, 4.0], 3)
    assert result.values[0] == pytest.approx(1.0)
    assert result.values.size == 4


def test_bound():
    assert acf(np.arange(400.0), 1).bound == pytest.approx(1.96 / 20)


def test_white_noise_inside_band():
    inside = []
    for k in range(20):
        noise = RngHandle(30, (k,)).generator().normal(size=10_000)
        result = acf(noise, 20)
        inside.append(np.abs(result.values[1:]) <= result.bound)
    assert np.mean(inside) >= 0.9


def test_ar1_lag_one():
    path = stationary_ar1(0.5, 50_000, RngHandle(32).generator())
    result = acf(path, 3)
    assert result.values[1] == pytest.approx(0.5, abs=0.02)
    assert list(result.outside_bound()) == [1, 2, 3]


def test_validation():
    with pytest.raises(ValidationError):
        acf([1.0, 1.0, 1.0], 1)
    with pytest.raises(ValidationError):
        acf([1.0, 2.0], 2)
