from typing import Iterable, Union

import numpy as np

from errors import EmptySampleError, ValidationError
from events.rng import RngHandle

ArrayLike = Union[Iterable[float], np.ndarray]


def _frozen_array(values: ArrayLike) -> np.ndarray:
    array = np.array(values, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


class EventSequence:
    """Strictly increasing event timestamps observed from an origin.

    Instances are immutable: the timestamp array is read-only, so a sequence
    can be shared between worker threads.
    """

    def __init__(self, times: ArrayLike, origin: float = 0.0) -> None:
        """Initialize an event sequence.

        Args:
            times: Event timestamps, strictly increasing
            origin: Start of the observation

        Raises:
            ValidationError: If timestamps are not finite, not strictly
                increasing, or precede the origin
        """
        self._times = _frozen_array(times)
        self._origin = float(origin)

        if not np.all(np.isfinite(self._times)) or not np.isfinite(self._origin):
            raise ValidationError("Event times and origin must be finite")
        if self._times.size and self._times[0] < self._origin:
            raise ValidationError(
                f"First event {self._times[0]!r} precedes origin {self._origin!r}"
            )
        if np.any(np.diff(self._times) <= 0):
            raise ValidationError("Event times must be strictly increasing")

    @property
    def times(self) -> np.ndarray:
        """Get the read-only timestamp array."""
        return self._times

    @property
    def origin(self) -> float:
        """Get the observation origin."""
        return self._origin

    def __len__(self) -> int:
        return int(self._times.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventSequence):
            return NotImplemented
        return self._origin == other._origin and np.array_equal(self._times, other._times)

    def __repr__(self) -> str:
        return f"EventSequence(n={len(self)}, origin={self._origin})"


class InterArrivalSequence:
    """Positive waiting times between consecutive events."""

    def __init__(self, taus: ArrayLike) -> None:
        """Initialize an inter-arrival sequence.

        Args:
            taus: Waiting times, all strictly positive

        Raises:
            ValidationError: If any waiting time is non-positive or not finite
        """
        self._taus = _frozen_array(taus)
        if not np.all(np.isfinite(self._taus)):
            raise ValidationError("Waiting times must be finite")
        if np.any(self._taus <= 0):
            raise ValidationError("Waiting times must be strictly positive")

    @property
    def taus(self) -> np.ndarray:
        """Get the read-only waiting-time array."""
        return self._taus

    def mean(self) -> float:
        """Get the sample mean waiting time."""
        if not self._taus.size:
            raise EmptySampleError("Mean of an empty inter-arrival sequence")
        return float(self._taus.mean())

    def __len__(self) -> int:
        return int(self._taus.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InterArrivalSequence):
            return NotImplemented
        return np.array_equal(self._taus, other._taus)

    def __repr__(self) -> str:
        return f"InterArrivalSequence(n={len(self)})"


def to_interarrivals(events: EventSequence) -> InterArrivalSequence:
    """Differences between consecutive events.

    The span from the origin to the first event is not a waiting time: the
    observation rarely starts on an event, so it is kept as metadata only.

    Raises:
        EmptySampleError: If the sequence has fewer than two events
    """
    if len(events) < 2:
        raise EmptySampleError(f"Need at least 2 events, got {len(events)}")
    return InterArrivalSequence(np.diff(events.times))


def from_interarrivals(taus: InterArrivalSequence, origin: float = 0.0,
                       include_origin: bool = False) -> EventSequence:
    """Rebuild event times as cumulative sums of the waiting times.

    Args:
        taus: Waiting times
        origin: Time the cumulative sums start from
        include_origin: Also place an event at the origin, which makes this the
            exact inverse of ``to_interarrivals`` with ``origin = times[0]``

    Returns:
        EventSequence: ``times[k] = origin + sum(taus[:k + 1])``

    Raises:
        ValidationError: If a wait is too small against the elapsed time to
            move the cumulative sum in float64
    """
    times = origin + np.cumsum(taus.taus)
    if include_origin:
        times = np.concatenate(([origin], times))
    stalled = np.flatnonzero(np.diff(times) <= 0)
    if stalled.size:
        k = int(stalled[0])
        wait = k if include_origin else k + 1
        raise ValidationError(
            f"Wait {wait} is lost against elapsed time {times[k]:.6g}: the sequence cannot be "
            f"written as timestamps, keep it as waiting times"
        )
    return EventSequence(times, origin=origin)


def count_in(events: EventSequence, window_start: float, window_end: float) -> int:
    """Count events in ``(window_start, window_end]``.

    Raises:
        ValidationError: If the window is inverted
    """
    if window_start > window_end:
        raise ValidationError(f"Inverted window ({window_start}, {window_end}]")
    times = events.times
    return int(np.searchsorted(times, window_end, side="right")
               - np.searchsorted(times, window_start, side="right"))


def shuffle(taus: InterArrivalSequence, rng: RngHandle) -> InterArrivalSequence:
    """Uniform random permutation of the waiting times, driven by ``rng``."""
    return InterArrivalSequence(rng.generator().permutation(taus.taus))
