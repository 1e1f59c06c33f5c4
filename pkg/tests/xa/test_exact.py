import dataclasses
import logging

import numpy as np
import pytest
from scipy import stats

from aging.aging import AgingMode, age_interarrivals
from config import XAConfig
from errors import ConfigurationError
from events.rng import RngHandle
from events.sequences import InterArrivalSequence
from generators.process_generator import GeneratorSpec
from significance.meta_analysis import null_stripe
from significance.two_sample import TestMethod, ks_test, two_sample_test
from xa.exact import compare_aged, default_config, expected_aged_count, run_exact, run_exact_on_samples
from xa.pair_sources import GeneratorPairSource, SamplePairSource, realizations_summary, sequence_digest
from xa.results import RunWarnings

logger = logging.getLogger(__name__)


def poisson_source(n=1000):
    return GeneratorPairSource(GeneratorSpec("poisson", {"lambda": 1.0}, n=n))


def small_config(**overrides):
    values = dict(t_a_min=1.0, t_a_max=20.0, T_a=4, N=20, seed=7)
    values.update(overrides)
    return XAConfig(**values)


def test_default_config_for_long_poisson_realizations():
    config = default_config(3000, 1.0)
    assert config.t_a_max == pytest.approx(100.0)
    assert config.t_a_min == pytest.approx(5.0)
    assert config.T_a == 20 and config.N == 100


def test_default_config_uses_percentile_floor():
    config = default_config(3000, 1.0, p01=4.0)
    assert config.t_a_min == pytest.approx(8.0)


def test_default_config_overrides():
    config = default_config(3000, 1.0, T_a=10, N=50, method="permutation", seed=3)
    assert config.t_a_min == pytest.approx(10.0)
    assert (config.N, config.method, config.seed) == (50, "permutation", 3)


def test_default_config_warns_on_large_t_a_max():
    warnings = RunWarnings(logger)
    config = default_config(3000, 1.0, t_a_max=500.0, warnings=warnings)
    assert config.t_a_max == 500.0
    assert "aged samples expected" in warnings.messages[0]


def test_default_config_warns_below_validity_threshold():
    warnings = RunWarnings(logger)
    default_config(3000, 1.0, warnings=warnings)
    assert any("30-sample validity threshold" in message for message in warnings.messages)
    quiet = RunWarnings(logger)
    default_config(10_000, 2.5, warnings=quiet)
    assert not quiet.messages


def test_default_t_a_max_is_capped_by_event_count():
    assert default_config(10_000, 2.5).t_a_max == pytest.approx(10_000 / 30)
    assert default_config(4000, 0.5).t_a_max == pytest.approx(4000 * 0.5 / 30)


@pytest.mark.parametrize("L,kwargs", [
    (50, {}),
    (3000, {"t_a_min": 200.0}),
    (3000, {"t_a_max": 2000.0, "t_a_min": 500.0}),
])
def test_default_config_rejects_unusable_grids(L, kwargs):
    with pytest.raises(ConfigurationError):
        default_config(L, 1.0, **kwargs)


def test_expected_aged_count():
    assert expected_aged_count(3000, 1.0, 99.0) == pytest.approx(30.0)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        XAConfig(t_a_min=5.0, t_a_max=1.0).validate()
    with pytest.raises(ConfigurationError):
        small_config(method="anderson").validate()
    with pytest.raises(ConfigurationError):
        small_config(s_max=50).validate()
    assert small_config().age_grid() == pytest.approx([1.0, 22 / 3, 41 / 3, 20.0])


def test_compare_aged_missing_sample():
    short = InterArrivalSequence([1.0, 1.0])
    assert compare_aged(short, short, 50.0, RngHandle(1), "ks", 1000, AgingMode.SEQUENTIAL) is None
    empty = InterArrivalSequence([])
    assert compare_aged(empty, short, 0.5, RngHandle(1), "ks", 1000, AgingMode.SEQUENTIAL) is None


def test_compare_aged_is_seeded():
    source = poisson_source()
    a, b = source(0, 0, RngHandle(1, (0, 0)))
    first = compare_aged(a, b, 3.0, RngHandle(1, (0, 0)), "permutation", 200, AgingMode.SEQUENTIAL)
    again = compare_aged(a, b, 3.0, RngHandle(1, (0, 0)), "permutation", 200, AgingMode.SEQUENTIAL)
    assert first == again
    assert first.method is TestMethod.PERMUTATION_MONTE_CARLO


def test_generator_pairs_are_independent_and_seeded():
    source = poisson_source(200)
    a, b = source(0, 0, RngHandle(1, (0, 0)))
    assert a != b
    assert source(0, 0, RngHandle(1, (0, 0))) == (a, b)
    assert source.pilot(1) not in (a, b)


def test_renewal_is_not_rejected():
    result = run_exact(poisson_source(), small_config(alpha=0.01))
    assert not result.reject_renewal
    assert len(result.ages) == 4
    assert all(age.valid for age in result.ages)
    assert all(len(age.outcomes) == 20 for age in result.ages)


def test_correlated_waits_are_rejected():
    source = GeneratorPairSource(GeneratorSpec("exp_ar1", {"beta": 0.9, "rate": 1.0}, n=3000))
    result = run_exact(source, small_config(t_a_max=60.0, N=30))
    assert result.reject_renewal
    assert result.z_g < 0


def test_worker_count_does_not_change_results():
    serial = run_exact(poisson_source(500), small_config(N=10))
    threaded = run_exact(poisson_source(500), small_config(N=10, workers=4))
    for a, b in zip(serial.ages, threaded.ages):
        assert np.array_equal(a.p_values, b.p_values, equal_nan=True)
    assert serial.z_g == threaded.z_g


def test_per_event_mode_warns():
    result = run_exact(poisson_source(500), small_config(N=10, mode=AgingMode.PER_EVENT))
    assert any("dependent" in message for message in result.warnings)


def test_sample_pairing_needs_two_n_realizations():
    realizations = [InterArrivalSequence(np.full(200, 1.0 + k)) for k in range(3)]
    with pytest.raises(ConfigurationError):
        SamplePairSource(realizations, N=2, seed=0)


def test_sample_pairing_uses_each_realization_once_per_age():
    realizations = [InterArrivalSequence(np.full(50, 1.0 + k / 10)) for k in range(10)]
    source = SamplePairSource(realizations, N=5, seed=3)
    for age in range(3):
        used = [id(r) for trial in range(5) for r in source(age, trial, RngHandle(3))]
        assert len(set(used)) == 10
    assert not np.array_equal(source.pairing(0), source.pairing(1))
    assert np.array_equal(source.pairing(0), SamplePairSource(realizations, 5, 3).pairing(0))


def test_duplicate_realizations_warn():
    spec = GeneratorSpec("poisson", {"lambda": 1.0}, n=400)
    realizations = [spec.realize_interarrivals(RngHandle(2, (k,))) for k in range(8)]
    realizations.append(realizations[0])
    realizations.append(realizations[1])
    source = SamplePairSource(realizations, N=5, seed=0)
    assert source.duplicate_count() == 2
    assert sequence_digest(realizations[0]) == sequence_digest(realizations[-2])
    config = small_config(N=5, t_a_max=10.0)
    result = run_exact_on_samples(realizations, config)
    assert any("identical" in message for message in result.warnings)


def test_recorded_samples_run():
    spec = GeneratorSpec("poisson", {"lambda": 1.0}, n=1000)
    realizations = [spec.realize_interarrivals(RngHandle(4, (k,))) for k in range(40)]
    L, mean_tau, p01 = realizations_summary(realizations)
    assert L == 1000
    assert mean_tau == pytest.approx(1.0, abs=0.05)
    config = default_config(L, mean_tau, p01, T_a=5, N=20, seed=4)
    result = run_exact_on_samples(realizations, config)
    assert len(result.ages) == 5
    assert result.N == 20


@pytest.mark.slow
def test_poisson_at_full_scale():
    source = GeneratorPairSource(GeneratorSpec("poisson", {"lambda": 1.0}, n=3000))
    config = default_config(3000, 1.0, seed=7)
    result = run_exact(source, config)
    assert not result.reject_renewal
    assert result.ages[0].valid


@pytest.mark.slow
def test_hawkes_is_rejected():
    spec = GeneratorSpec("hawkes", {"lambda0": 0.75, "alpha": 0.2, "beta": 0.4}, horizon=4000.0)
    source = GeneratorPairSource(spec)
    L, mean_tau, p01 = realizations_summary([source.pilot(11)])
    result = run_exact(source, default_config(L, mean_tau, p01, seed=11))
    assert result.reject_renewal


@pytest.mark.slow
def test_stoch_vol_is_rejected():
    source = GeneratorPairSource(GeneratorSpec("stoch_vol", {"b": 0.97, "s": 0.89}, n=10_000))
    L, mean_tau, p01 = realizations_summary([source.pilot(13)])
    result = run_exact(source, default_config(L, mean_tau, p01, seed=13, workers=4))
    assert result.reject_renewal


def pooled_p_values(result):
    p = np.concatenate([age.p_values for age in result.ages])
    return p[~np.isnan(p)]


def seed_mean_g_p(source, config, seeds):
    runs = [run_exact(source, dataclasses.replace(config, seed=seed)) for seed in seeds]
    return np.mean([[age.g_p for age in run.ages] for run in runs], axis=0), runs


@pytest.mark.slow
def test_poisson_p_values_stay_in_stripe():
    source = GeneratorPairSource(GeneratorSpec("poisson", {"lambda": 1.0}, n=3000))
    result = run_exact(source, default_config(3000, 1.0, t_a_max=20.0, seed=17))
    assert all(age.valid for age in result.ages)
    assert sum(age.in_stripe for age in result.ages) >= 17
    assert not result.reject_renewal
    assert stats.kstest(pooled_p_values(result), "uniform").statistic < 0.05


def test_aged_poisson_waits_are_exponential():
    source = GeneratorPairSource(GeneratorSpec("poisson", {"lambda": 1.0}, n=3000))
    pooled = np.concatenate([
        age_interarrivals(source(0, trial, RngHandle(19, (0, trial)))[0], 50.0).taus
        for trial in range(100)
    ])
    assert stats.kstest(pooled, "expon").statistic < 0.05


@pytest.mark.slow
def test_exp_ar1_default_grid_is_rejected():
    spec = GeneratorSpec("exp_ar1", {"beta": 0.674, "rate": 0.4}, horizon=10_000.0)
    source = GeneratorPairSource(spec)
    L, mean_tau, p01 = realizations_summary([source.pilot(23)])
    config = default_config(L, mean_tau, p01, seed=23)
    assert config.t_a_max == pytest.approx(L / 30)
    assert 100 < config.t_a_max < 170
    result = run_exact(source, config)
    assert result.reject_renewal
    assert result.ages[0].g_p < result.stripe_lo


@pytest.mark.slow
@pytest.mark.parametrize("kind, weak, strong, parameters", [
    ("abs_ar1", 0.3, 0.9, {}),
    ("exp_ar1", 0.53, 0.8, {"rate": 1.0}),
])
def test_memory_grows_with_correlation(kind, weak, strong, parameters):
    config = small_config(t_a_max=10.0, N=30)
    betas = [weak, (weak + strong) / 2, strong] if kind == "abs_ar1" else [weak, strong]
    z = []
    g_first = []
    for beta in betas:
        source = GeneratorPairSource(GeneratorSpec(kind, {"beta": beta, **parameters}, n=3000))
        g_p, runs = seed_mean_g_p(source, config, seeds=(1, 2, 3))
        z.append(np.mean([run.z_g for run in runs]))
        g_first.append(g_p[0])
    assert z == sorted(z, reverse=True)
    assert g_first == sorted(g_first, reverse=True)


@pytest.mark.slow
def test_hawkes_memory_fades_at_large_ages():
    spec = GeneratorSpec("hawkes", {"lambda0": 0.75, "alpha": 0.2, "beta": 0.4}, horizon=4000.0)
    source = GeneratorPairSource(spec)
    L, mean_tau, p01 = realizations_summary([source.pilot(29)])
    config = default_config(L, mean_tau, p01, N=30, seed=29)
    g_p, _ = seed_mean_g_p(source, config, seeds=range(29, 35))
    stripe_lo, stripe_hi = null_stripe(30)
    assert min(g_p[:3]) < stripe_lo
    assert np.all((stripe_lo <= g_p[-5:]) & (g_p[-5:] <= stripe_hi))


@pytest.mark.slow
def test_superposition_of_poisson_is_not_rejected():
    spec = GeneratorSpec("superposition", {"components": [
        {"kind": "poisson", "lambda": 1.0}, {"kind": "poisson", "lambda": 2.0}]}, horizon=1000.0)
    source = GeneratorPairSource(spec)
    L, mean_tau, p01 = realizations_summary([source.pilot(37)])
    assert mean_tau == pytest.approx(1 / 3, rel=0.05)
    result = run_exact(source, default_config(L, mean_tau, p01, seed=37))
    assert not result.reject_renewal


@pytest.mark.slow
def test_superposition_memory_is_confined_to_small_ages():
    spec = GeneratorSpec("superposition", {"components": [
        {"kind": "poisson", "lambda": 8.0},
        {"kind": "exp_ar1", "beta": 0.674, "rate": 0.75}]}, horizon=2000.0)
    source = GeneratorPairSource(spec)
    config = XAConfig(t_a_min=0.1, t_a_max=10.0, T_a=10, N=50, seed=41)
    result = run_exact(source, config)
    g_p = np.array([age.g_p for age in result.ages])
    # memory below the slower component's mean wait of 1.33, none well above it
    assert g_p[:3].min() < result.stripe_lo
    assert np.all((result.stripe_lo <= g_p[-3:]) & (g_p[-3:] <= result.stripe_hi))


@pytest.mark.slow
def test_ks_and_permutation_p_values_agree():
    close = 0
    for k in range(200):
        generator = RngHandle(43, (k,)).generator()
        a, b = generator.exponential(size=200), generator.exponential(size=200)
        asymptotic = ks_test(a, b).p_value
        exact = two_sample_test(a, b, "permutation", RngHandle(44, (k,)), s_max=20_000).p_value
        close += abs(asymptotic - exact) <= 0.02
    assert close >= 190
