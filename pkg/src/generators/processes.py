"""Seeded simulators of the renewal and non-renewal validation processes."""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import signal

from aging.analytic import ParetoLaw
from errors import NonStationaryError, ValidationError
from events.rng import RngHandle
from events.sequence_loader import break_ties
from events.sequences import EventSequence, InterArrivalSequence

logger = logging.getLogger(__name__)

_HAWKES_BATCH = 4096


def _check_count(n: int) -> None:
    if n < 1:
        raise ValidationError(f"Length must be at least 1, got {n}")


def _open_uniform(generator: np.random.Generator, n: int) -> np.ndarray:
    u = generator.random(n)
    return np.where(u == 0.0, np.nextafter(0.0, 1.0), u)


def gen_poisson(lam: float, n: int, rng: RngHandle) -> InterArrivalSequence:
    """Exponential(lam) waiting times by inverse CDF, ``-log(u) / lam``."""
    if lam <= 0:
        raise ValidationError(f"Rate must be positive, got lambda={lam}")
    _check_count(n)
    return InterArrivalSequence(-np.log(_open_uniform(rng.generator(), n)) / lam)


def gen_pareto_renewal(law: ParetoLaw, n: int, rng: RngHandle) -> InterArrivalSequence:
    """Pareto waiting times ``theta * (u^(-1/(mu-1)) - 1)`` by inverse survival."""
    _check_count(n)
    u = _open_uniform(rng.generator(), n)
    return InterArrivalSequence(law.theta * np.expm1(-np.log(u) / (law.mu - 1)))


def check_ar1(beta: float) -> None:
    if not abs(beta) < 1:
        raise NonStationaryError(f"AR(1) coefficient must satisfy |beta| < 1, got {beta}")


def stationary_ar1(beta: float, n: int, generator: np.random.Generator) -> np.ndarray:
    """AR(1) path ``X_s = beta X_{s-1} + eps_s`` with unit normal innovations.

    The chain starts from its stationary law Normal(0, 1 / (1 - beta^2)).
    """
    check_ar1(beta)
    previous = generator.normal(0.0, 1.0 / math.sqrt(1.0 - beta ** 2))
    innovations = generator.normal(size=n)
    path, _ = signal.lfilter([1.0], [1.0, -beta], innovations, zi=[beta * previous])
    return path


def gen_abs_ar1(beta: float, n: int, rng: RngHandle) -> InterArrivalSequence:
    """Waiting times ``|X_s|`` of a zero-mean stationary AR(1)."""
    _check_count(n)
    return InterArrivalSequence(np.abs(stationary_ar1(beta, n, rng.generator())))


def gen_exp_ar1(beta: float, n: int, rng: RngHandle,
                rate: Optional[float] = None) -> InterArrivalSequence:
    """Log-normal correlated waiting times ``exp(X_s)``.

    Args:
        beta: AR(1) coefficient
        n: Number of waiting times
        rng: Randomness
        rate: Rescale so the mean waiting time is ``1 / rate``; the natural
            mean is ``exp(1 / (2 (1 - beta^2)))``
    """
    _check_count(n)
    taus = np.exp(stationary_ar1(beta, n, rng.generator()))
    if rate is not None:
        if rate <= 0:
            raise ValidationError(f"Rate must be positive, got {rate}")
        taus = taus / (rate * exp_ar1_mean(beta))
    return InterArrivalSequence(taus)


def exp_ar1_mean(beta: float) -> float:
    """Mean of ``exp(X)`` for the stationary unit-innovation AR(1)."""
    check_ar1(beta)
    return math.exp(1.0 / (2.0 * (1.0 - beta ** 2)))


def gen_stoch_vol(b: float, s: float, n: int, rng: RngHandle,
                  log_clip: Optional[float] = None) -> InterArrivalSequence:
    """Uncorrelated but dependent waiting times ``exp(z_t sigma_t)``.

    ``sigma_t = b sigma_{t-1} + s eps_t`` is stationary; ``z`` comes from substream 0
    and ``eps`` from substream 1 of ``rng``.

    Args:
        b: AR(1) coefficient of the volatility
        s: Volatility innovation scale
        n: Number of waiting times
        rng: Randomness
        log_clip: Optional bound on ``|z_t sigma_t|``. Strongly persistent
            volatility produces waits whose ratio exceeds float64 resolution,
            which only matters once they are turned into timestamps. The clip
            is odd and monotone, so the log-waits stay uncorrelated.
    """
    if s <= 0:
        raise ValidationError(f"Volatility scale must be positive, got s={s}")
    _check_count(n)
    sigma = s * stationary_ar1(b, n, rng.child(1).generator())
    z = rng.child(0).generator().normal(size=n)
    log_waits = z * sigma
    if log_clip is not None:
        if log_clip <= 0:
            raise ValidationError(f"log_clip must be positive, got {log_clip}")
        clipped = int(np.count_nonzero(np.abs(log_waits) > log_clip))
        if clipped:
            logger.debug(f"Clipped {clipped} of {n} stochastic-volatility log-waits at {log_clip}")
        log_waits = np.clip(log_waits, -log_clip, log_clip)
    return InterArrivalSequence(np.exp(log_waits))


def hawkes_mean_rate(lambda0: float, alpha: float, beta: float) -> float:
    """Stationary event rate ``beta / (beta - alpha) * lambda0``; infinite when alpha >= beta."""
    if alpha >= beta:
        return math.inf
    return beta / (beta - alpha) * lambda0


def hawkes_intensity(events: EventSequence, t: float, lambda0: float, alpha: float,
                     beta: float) -> float:
    """Conditional intensity ``lambda0 + sum_{t_j < t} alpha exp(-beta (t - t_j))``."""
    past = events.times[events.times < t]
    return float(lambda0 + np.sum(alpha * np.exp(-beta * (t - past))))


def check_hawkes(lambda0: float, alpha: float, beta: float) -> None:
    if lambda0 <= 0:
        raise ValidationError(f"Baseline intensity must be positive, got {lambda0}")
    if alpha < 0:
        raise ValidationError(f"Excitation must be non-negative, got alpha={alpha}")
    if beta <= 0:
        raise ValidationError(f"Decay must be positive, got beta={beta}")
    if alpha >= beta:
        logger.warning(
            f"Hawkes alpha={alpha} >= beta={beta}: non-stationary, no mean rate is defined"
        )


def gen_hawkes(lambda0: float, alpha: float, beta: float, horizon: float,
               rng: RngHandle) -> EventSequence:
    """Exponential-kernel Hawkes process on ``(0, horizon]`` by Ogata thinning.

    The excitation ``sum alpha exp(-beta (t - t_j))`` is carried recursively,
    so each proposal costs O(1). The intensity just after the current time
    bounds it until the next event because the kernel only decays.

    Raises:
        ValidationError: If the horizon or a parameter is not admissible
    """
    check_hawkes(lambda0, alpha, beta)
    if horizon <= 0:
        raise ValidationError(f"Horizon must be positive, got {horizon}")

    generator = rng.generator()
    times = []
    t = 0.0
    excitation = 0.0
    waits = generator.standard_exponential(_HAWKES_BATCH)
    marks = generator.random(_HAWKES_BATCH)
    cursor = 0
    while True:
        if cursor == _HAWKES_BATCH:
            waits = generator.standard_exponential(_HAWKES_BATCH)
            marks = generator.random(_HAWKES_BATCH)
            cursor = 0
        bound = lambda0 + excitation
        w = waits[cursor] / bound
        u = marks[cursor]
        cursor += 1
        t += w
        if t > horizon:
            break
        excitation *= math.exp(-beta * w)
        if u * bound <= lambda0 + excitation:
            times.append(t)
            excitation += alpha
    return EventSequence(times, origin=0.0)


def gen_superposition(a: EventSequence, b: EventSequence, jitter: Optional[float] = None,
                      rng: Optional[RngHandle] = None) -> EventSequence:
    """Pool two event streams into one sorted stream.

    Raises:
        ValidationError: If both streams share a timestamp and no jitter is given
    """
    merged = np.sort(np.concatenate((a.times, b.times)), kind="stable")
    if np.any(np.diff(merged) == 0):
        if not jitter:
            raise ValidationError("Pooled streams share a timestamp; pass a jitter to break ties")
        merged = break_ties(merged, jitter, rng)
    return EventSequence(merged, origin=min(a.origin, b.origin))


@dataclass(frozen=True)
class PolyaUrnDraws:
    """Draws of a Polya urn and their event view.

    Attributes:
        draws: True where the drawn ball has colour A
        events: One event at the index of every colour-A draw
    """
    draws: np.ndarray
    events: EventSequence


def gen_polya_urn(a0: int, b0: int, n: int, rng: RngHandle) -> PolyaUrnDraws:
    """Draw-and-reinforce urn: each drawn colour gains one ball.

    The draws form an exchangeable binary sequence. Mapping colour-A draw
    indices to event times is a convention of this toolkit.
    """
    if a0 < 1 or b0 < 1:
        raise ValidationError(f"Urn must start with at least one ball of each colour, got {a0}, {b0}")
    _check_count(n)
    u = rng.generator().random(n)
    draws = np.empty(n, dtype=bool)
    a, total = a0, a0 + b0
    for i in range(n):
        draws[i] = u[i] * total < a
        a += int(draws[i])
        total += 1
    return PolyaUrnDraws(draws=draws, events=EventSequence(np.flatnonzero(draws).astype(float)))
