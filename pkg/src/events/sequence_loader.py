import logging
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Optional, Union

import numpy as np

from errors import ValidationError
from events.rng import RngHandle
from events.sequences import EventSequence, InterArrivalSequence, from_interarrivals


class InputMode(Enum):
    """How the numbers of an input file are interpreted."""
    TIMESTAMPS = "timestamps"
    TAUS = "taus"


class SequenceLoader:
    """Loads event data from newline-delimited decimal text.

    This class is responsible for:
    - Reading one number per line, skipping '#' comment lines
    - Interpreting the numbers as timestamps or as waiting times
    - Validating the simple-process assumption (no repeated timestamps)
    - Optionally breaking ties with uniform jitter
    """

    def __init__(self, file_path: Union[str, Path]) -> None:
        """Initialize the sequence loader.

        Args:
            file_path: Path to the data file
        """
        self._file_path = Path(file_path)
        self._logger = logging.getLogger(__name__)

    def read_values(self) -> np.ndarray:
        """Read the raw numbers of the file.

        Returns:
            np.ndarray: Values in file order

        Raises:
            FileNotFoundError: If the file doesn't exist
            ValidationError: If a line is not a decimal number
        """
        if not self._file_path.exists():
            raise FileNotFoundError(f"Sequence file not found: {self._file_path}")
        try:
            values = np.loadtxt(self._file_path, comments="#", dtype=float, ndmin=1)
        except ValueError as e:
            self._logger.error(f"Invalid number in {self._file_path}: {e}")
            raise ValidationError(f"Invalid number in {self._file_path}: {e}") from e
        if values.size and np.all(values == np.round(values)):
            self._logger.warning(
                f"{self._file_path} holds integer ticks; the KS test is conservative "
                "for discrete variables"
            )
        return values

    def load(self, mode: InputMode = InputMode.TIMESTAMPS, jitter: Optional[float] = None,
             rng: Optional[RngHandle] = None) -> EventSequence:
        """Load the file as an event sequence.

        Args:
            mode: Interpretation of the numbers
            jitter: Tie-breaking noise width; ties are rejected when None
            rng: Randomness for the jitter

        Returns:
            EventSequence: Loaded events

        Raises:
            ValidationError: If the data violate the mode's ordering rule
        """
        values = self.read_values()
        if mode is InputMode.TAUS:
            events = from_interarrivals(InterArrivalSequence(values), origin=0.0,
                                        include_origin=True)
        else:
            events = EventSequence(break_ties(values, jitter, rng) if jitter else values,
                                   origin=min(0.0, float(values.min())) if values.size else 0.0)
        self._logger.info(f"Loaded {len(events)} events from {self._file_path}")
        return events

    def load_interarrivals(self, mode: InputMode = InputMode.TAUS,
                           jitter: Optional[float] = None,
                           rng: Optional[RngHandle] = None) -> InterArrivalSequence:
        """Load the file as waiting times."""
        if mode is InputMode.TAUS:
            return InterArrivalSequence(self.read_values())
        return InterArrivalSequence(np.diff(self.load(mode, jitter, rng).times))


def break_ties(times: np.ndarray, jitter: float, rng: Optional[RngHandle]) -> np.ndarray:
    """Add uniform noise in ``(0, jitter)`` and re-sort.

    Raises:
        ValidationError: If no randomness is supplied
    """
    if rng is None:
        raise ValidationError("Jitter needs an RngHandle")
    if jitter <= 0:
        raise ValidationError(f"Jitter must be positive, got {jitter}")
    noise = rng.generator().uniform(0.0, jitter, size=len(times))
    # uniform() is half-open at the low end
    noise = np.where(noise == 0.0, jitter / 2, noise)
    return np.sort(np.asarray(times, dtype=float) + noise)


def write_sequence(file_path: Union[str, Path], values: Iterable[float],
                   header: Optional[List[str]] = None) -> None:
    """Write one number per line at full round-trip precision.

    Args:
        file_path: Destination file
        values: Numbers to write
        header: Optional comment lines, written with a leading '#'
    """
    lines = [f"# {line}" for line in header or []]
    lines.extend(repr(float(v)) for v in values)
    Path(file_path).write_text("\n".join(lines) + "\n")
