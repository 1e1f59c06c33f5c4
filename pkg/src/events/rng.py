from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import ValidationError

SEED_MAX = 2 ** 64 - 1


@dataclass(frozen=True)
class RngHandle:
    """Seed plus substream address for reproducible randomness.

    Every random draw in the toolkit goes through a handle. The generator is
    built from a ``numpy.random.SeedSequence`` whose spawn key is the stream, so
    a given ``(seed, stream)`` pair yields the same draws on every platform and
    independently of which worker thread consumes it.

    Attributes:
        seed: 64-bit unsigned run seed
        stream: Substream address, e.g. ``(age_index, trial_index)``
    """
    seed: int
    stream: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) <= SEED_MAX:
            raise ValidationError(f"Seed must be a 64-bit unsigned integer, got {self.seed}")
        stream = tuple(int(s) for s in self.stream)
        if any(s < 0 for s in stream):
            raise ValidationError(f"Stream ids must be non-negative, got {stream}")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "stream", stream)

    def child(self, *ids: int) -> "RngHandle":
        """Get the handle of a nested substream.

        Args:
            ids: Substream ids appended to the current stream

        Returns:
            RngHandle: Handle addressing ``stream + ids``
        """
        return RngHandle(self.seed, self.stream + tuple(ids))

    def generator(self) -> np.random.Generator:
        """Build a fresh generator positioned at the start of this substream.

        Returns:
            np.random.Generator: PCG64 generator for ``(seed, stream)``
        """
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        return np.random.Generator(np.random.PCG64(sequence))
