import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from errors import EmptySampleError, ValidationError
from events.rng import RngHandle
from events.sequences import EventSequence, InterArrivalSequence, shuffle

logger = logging.getLogger(__name__)


class AgingMode(Enum):
    """Window placement of the aging experiment."""
    SEQUENTIAL = "sequential"
    PER_EVENT = "per_event"


@dataclass(frozen=True)
class AgedSample:
    """Waiting times recorded after a blind window of length ``t_a``.

    Attributes:
        t_a: Latency of the observer
        taus: Residual waits, measured from the window end to the next event
        n_discarded: Events whose window runs past the last event. In
            sequential mode these are the events from the last window start
            onward, since a window opened on any of them cannot close.
        mode: Window placement used
        dependent: True when windows overlap (per-event mode)
    """
    t_a: float
    taus: np.ndarray = field(repr=False)
    n_discarded: int
    mode: AgingMode
    dependent: bool = False

    def __len__(self) -> int:
        return int(self.taus.size)


def _check_latency(t_a: float) -> None:
    if t_a < 0 or not np.isfinite(t_a):
        raise ValidationError(f"Latency must be a finite non-negative number, got {t_a}")


def _next_event_index(times: np.ndarray, t_a: float) -> np.ndarray:
    # first event strictly after t_i + t_a, for every i
    return np.searchsorted(times, times + t_a, side="right")


def age_interarrivals(taus: InterArrivalSequence, t_a: float,
                      mode: AgingMode = AgingMode.SEQUENTIAL) -> AgedSample:
    """Age the event sequence described by its waiting times.

    The sequence starts with an event, followed by one event per wait. In
    sequential mode the elapsed time is summed wait by wait from the current
    window start and reset on every detection, so no absolute time is ever
    formed and waits far below the total duration are never rounded away.

    Args:
        taus: Waiting times between consecutive events
        t_a: Window length
        mode: Window placement

    Returns:
        AgedSample: Recorded waits and the number of discarded windows

    Raises:
        ValidationError: If ``t_a`` is negative or not finite
        EmptySampleError: If no window closes before the last event
    """
    _check_latency(t_a)
    values = taus.taus
    if mode is AgingMode.PER_EVENT:
        times = np.concatenate(([0.0], np.cumsum(values)))
        nxt = _next_event_index(times, t_a)
        kept = nxt < times.size
        starts = np.flatnonzero(kept)
        aged = times[nxt[kept]] - (times[starts] + t_a)
        n_discarded = int(times.size - starts.size)
    else:
        recorded = []
        elapsed = 0.0
        pending = 0
        for tau in values.tolist():
            elapsed += tau
            pending += 1
            if elapsed > t_a:
                recorded.append(elapsed - t_a)
                elapsed = 0.0
                pending = 0
        aged = np.asarray(recorded, dtype=float)
        n_discarded = pending + 1

    if aged.size == 0:
        raise EmptySampleError(
            f"No aged samples at t_a={t_a}: every window runs past the last event",
            n_discarded=n_discarded,
        )
    aged.setflags(write=False)
    return AgedSample(t_a=float(t_a), taus=aged, n_discarded=n_discarded, mode=mode,
                      dependent=mode is AgingMode.PER_EVENT)


def age_sequence(events: EventSequence, t_a: float,
                 mode: AgingMode = AgingMode.SEQUENTIAL) -> AgedSample:
    """Age an event sequence at latency ``t_a``.

    In sequential mode a window opens on the first event, the first event
    strictly after the window end is detected, the wait from the window end to
    it is recorded and the next window opens on the detected event. In
    per-event mode one window opens on every event and the samples overlap.

    Args:
        events: Source events
        t_a: Window length
        mode: Window placement

    Returns:
        AgedSample: Recorded waits and the number of discarded windows

    Raises:
        ValidationError: If the sequence is empty or ``t_a`` negative
        EmptySampleError: If no window closes before the last event
    """
    if len(events) == 0:
        raise ValidationError("Cannot age an empty event sequence")
    return age_interarrivals(InterArrivalSequence(np.diff(events.times)), t_a, mode)


def shuffled_aged(taus: InterArrivalSequence, t_a: float, rng: RngHandle,
                  mode: AgingMode = AgingMode.SEQUENTIAL) -> AgedSample:
    """Age a shuffled copy of the waiting times.

    The original waiting times are permuted first and the permuted sequence
    is aged afterwards. Shuffling the aged values instead would leave their
    empirical distribution unchanged and the comparison empty.

    Args:
        taus: Original waiting times
        t_a: Window length
        rng: Randomness for the permutation
        mode: Window placement

    Returns:
        AgedSample: Aged sample of the renewal baseline
    """
    if len(taus) == 0:
        raise ValidationError("Cannot age an empty inter-arrival sequence")
    return age_interarrivals(shuffle(taus, rng), t_a, mode)
def age_ensemble(realizations: Sequence[EventSequence], t_a: float) -> AgedSample:
    """Age many realizations once each.

    Each realization contributes the wait from ``origin + t_a`` to its first
    event strictly after that instant; realizations without such an event are
    discarded.

    Raises:
        EmptySampleError: If no realization reaches past ``origin + t_a``
    """
    if t_a < 0:
        raise ValidationError(f"Latency must be non-negative, got {t_a}")
    taus = []
    n_discarded = 0
    for events in realizations:
        end = events.origin + t_a
        k = int(np.searchsorted(events.times, end, side="right"))
        if k < len(events):
            taus.append(events.times[k] - end)
        else:
            n_discarded += 1
    if not taus:
        raise EmptySampleError(f"No realization reaches past t_a={t_a}",
                               n_discarded=n_discarded)
    if n_discarded:
        logger.warning(f"Ensemble aging discarded {n_discarded} short realizations")
    array = np.asarray(taus, dtype=float)
    array.setflags(write=False)
    return AgedSample(t_a=float(t_a), taus=array, n_discarded=n_discarded,
                      mode=AgingMode.PER_EVENT, dependent=False)
