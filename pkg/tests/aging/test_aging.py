import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from aging.aging import AgingMode, age_ensemble, age_interarrivals, age_sequence, shuffled_aged
from aging.analytic import ParetoLaw, survival_pareto
from aging.tail import hill_tail_index
from errors import EmptySampleError, ValidationError
from events.rng import RngHandle
from events.sequences import EventSequence, InterArrivalSequence, from_interarrivals
from generators.processes import gen_exp_ar1, gen_pareto_renewal, gen_poisson


def test_sequential_unit_spacing():
    aged = age_sequence(EventSequence([0, 1, 2, 3, 4]), 0.5)
    assert np.allclose(aged.taus, [0.5, 0.5, 0.5, 0.5])
    assert aged.n_discarded == 1
    assert not aged.dependent


def test_zero_latency_is_identity():
    events = from_interarrivals(InterArrivalSequence([1, 2, 3]), 0.0, include_origin=True)
    assert np.allclose(age_sequence(events, 0.0).taus, [1, 2, 3])


def test_sequential_windows_skip_events():
    # windows (0, 2.5], (3, 5.5] detect 3 and 6
    aged = age_sequence(EventSequence([0, 1, 2, 3, 4, 5, 6]), 2.5)
    assert np.allclose(aged.taus, [0.5, 0.5])


def test_per_event_mode_overlaps():
    aged = age_sequence(EventSequence([0, 1, 2, 3]), 1.5, AgingMode.PER_EVENT)
    assert np.allclose(aged.taus, [0.5, 0.5])
    assert aged.n_discarded == 2
    assert aged.dependent


def test_latency_longer_than_sequence():
    with pytest.raises(EmptySampleError) as excinfo:
        age_sequence(EventSequence([0, 1, 2]), 10.0)
    assert excinfo.value.n_discarded == 3


@pytest.mark.parametrize("t_a", [-1.0, np.inf])
def test_invalid_latency(t_a):
    with pytest.raises(ValidationError):
        age_sequence(EventSequence([0, 1, 2]), t_a)


def test_empty_sequence_rejected():
    with pytest.raises(ValidationError):
        age_sequence(EventSequence([]), 1.0)


def test_aged_waits_are_positive():
    events = from_interarrivals(gen_poisson(1.0, 5000, RngHandle(4)), 0.0, include_origin=True)
    aged = age_sequence(events, 3.0)
    assert np.all(aged.taus > 0)


def test_exponential_is_memoryless():
    events = from_interarrivals(gen_poisson(1.0, 100_000, RngHandle(8)), 0.0, include_origin=True)
    aged = age_sequence(events, 5.0)
    assert stats.kstest(aged.taus, "expon").pvalue > 1e-3


def test_correlated_waits_age():
    taus = gen_exp_ar1(0.9, 50_000, RngHandle(8), rate=1.0)
    events = from_interarrivals(taus, 0.0, include_origin=True)
    aged = age_sequence(events, 10.0)
    baseline = shuffled_aged(taus, 10.0, RngHandle(9))
    assert stats.ks_2samp(aged.taus, baseline.taus).pvalue < 1e-3


def test_shuffled_aged_constant_waits():
    taus = InterArrivalSequence([2.0] * 20)
    events = from_interarrivals(taus, 0.0, include_origin=True)
    shuffled = shuffled_aged(taus, 1.5, RngHandle(1))
    assert np.array_equal(shuffled.taus, age_sequence(events, 1.5).taus)


def test_shuffled_aged_zero_latency():
    shuffled = shuffled_aged(InterArrivalSequence([1, 2, 3]), 0.0, RngHandle(1))
    assert sorted(shuffled.taus) == [1, 2, 3]


def test_shuffled_aged_matches_renewal_law():
    taus = gen_poisson(1.0, 50_000, RngHandle(21))
    events = from_interarrivals(taus, 0.0, include_origin=True)
    shuffled = shuffled_aged(taus, 2.0, RngHandle(22))
    assert stats.ks_2samp(age_sequence(events, 2.0).taus, shuffled.taus).pvalue > 1e-3


def test_age_ensemble():
    realizations = [EventSequence([0.5, 2.0]), EventSequence([1.5, 4.0]), EventSequence([0.2])]
    aged = age_ensemble(realizations, 1.0)
    assert np.allclose(aged.taus, [1.0, 0.5])
    assert aged.n_discarded == 1


def test_age_ensemble_all_short():
    with pytest.raises(EmptySampleError):
        age_ensemble([EventSequence([0.5])], 1.0)


def test_trailing_events_are_discarded():
    # windows (0, 2.5], (3, 5.5] detect 3 and 6; a window opened on 6 or 7 runs past the end
    aged = age_sequence(EventSequence([0, 1, 2, 3, 4, 5, 6, 7]), 2.5)
    assert np.allclose(aged.taus, [0.5, 0.5])
    assert aged.n_discarded == 2


def test_waits_below_time_resolution_still_age():
    taus = InterArrivalSequence([1e20, 1.0, 1.0, 1.0])
    with pytest.raises(ValidationError, match="cannot be written as timestamps"):
        from_interarrivals(taus, 0.0, include_origin=True)
    aged = age_interarrivals(taus, 0.5)
    assert np.allclose(aged.taus[1:], [0.5, 0.5, 0.5])


@pytest.mark.parametrize("mu", [1.5, 2.1])
def test_heavy_tailed_waits_age(mu):
    taus = gen_pareto_renewal(ParetoLaw(mu, 1.0), 20_000, RngHandle(31))
    aged = age_interarrivals(taus, 50.0)
    assert aged.taus.size > 0
    assert np.all(aged.taus > 0)
    assert shuffled_aged(taus, 50.0, RngHandle(32)).taus.size > 0


@given(st.lists(st.integers(min_value=1, max_value=20), min_size=1, max_size=60),
       st.integers(min_value=0, max_value=40), st.integers(min_value=0, max_value=40))
def test_sequential_count_shrinks_with_latency(waits, first, second):
    short, long = sorted((first, second))
    taus = InterArrivalSequence(waits)

    def count(t_a):
        try:
            return age_interarrivals(taus, t_a).taus.size
        except EmptySampleError:
            return 0

    assert count(long) <= count(short)


def test_aged_pareto_mean_exceeds_unaged():
    taus = gen_pareto_renewal(ParetoLaw(2.5, 1.0), 500_000, RngHandle(33))
    aged = age_interarrivals(taus, 100.0)
    assert aged.taus.size > 1000
    assert aged.taus.mean() > 2 * taus.taus.mean()


@pytest.mark.slow
def test_aged_pareto_tail_exponent():
    law = ParetoLaw(2.5, 1.0)
    taus = gen_pareto_renewal(law, 4_000_000, RngHandle(34))
    aged = age_interarrivals(taus, 1e3).taus
    assert aged.size > 2000
    # the aged density decays with exponent mu - 1, one less than the unaged law
    density_exponent = 1 + hill_tail_index(aged + law.theta, k=aged.size - 1)
    assert density_exponent == pytest.approx(law.mu - 1, abs=0.15)
    tail = np.mean(aged > 20.0)
    assert tail == pytest.approx(survival_pareto(law, 20.0, aged=True), abs=0.05)
    assert tail > 10 * survival_pareto(law, 20.0)
