import hashlib
from typing import Callable, List, Sequence, Tuple

import numpy as np

from errors import ConfigurationError
from events.rng import RngHandle
from events.sequences import InterArrivalSequence
from generators.process_generator import GeneratorSpec

# (age_index, trial_index, rng) -> (A, B) as waiting times
PairSource = Callable[[int, int, RngHandle], Tuple[InterArrivalSequence, InterArrivalSequence]]


class GeneratorPairSource:
    """Draws a fresh pair of independent realizations for every cell.

    Realization A comes from substream 0 of the cell and realization B from
    substream 1. Both are handed over as waiting times.
    """

    def __init__(self, spec: GeneratorSpec) -> None:
        self._spec = spec
        self._spec.validate()

    @property
    def spec(self) -> GeneratorSpec:
        return self._spec

    def pilot(self, seed: int) -> InterArrivalSequence:
        """Get the realization used to derive default latencies.

        It lives on the root stream of the seed, which no cell uses.
        """
        return self._spec.realize_interarrivals(RngHandle(seed))

    def __call__(self, age_index: int, trial_index: int,
                 rng: RngHandle) -> Tuple[InterArrivalSequence, InterArrivalSequence]:
        return (self._spec.realize_interarrivals(rng.child(0)),
                self._spec.realize_interarrivals(rng.child(1)))


def sequence_digest(taus: InterArrivalSequence) -> str:
    """SHA-256 of the waiting times."""
    return hashlib.sha256(np.ascontiguousarray(taus.taus).tobytes()).hexdigest()


class SamplePairSource:
    """Pairs recorded realizations without reuse inside an age.

    For every age the realizations are permuted on stream ``(age_index,)``
    and trial i takes positions ``2i`` and ``2i + 1``.
    """

    def __init__(self, realizations: Sequence[InterArrivalSequence], N: int, seed: int) -> None:
        """Initialize the pair source.

        Args:
            realizations: Waiting times of independent recorded sequences
            N: Trials per age
            seed: Run seed

        Raises:
            ConfigurationError: If there are fewer than 2N realizations
        """
        if len(realizations) < 2 * N:
            raise ConfigurationError(
                f"Independent pairing needs at least 2N={2 * N} realizations, "
                f"got {len(realizations)}"
            )
        self._realizations = list(realizations)
        self._seed = seed
        self._pairings: dict = {}

    def duplicate_count(self) -> int:
        """Get the number of realizations identical to an earlier one."""
        digests = [sequence_digest(r) for r in self._realizations]
        return len(digests) - len(set(digests))

    def pairing(self, age_index: int) -> np.ndarray:
        """Get the realization order used at one age."""
        if age_index not in self._pairings:
            generator = RngHandle(self._seed, (age_index,)).generator()
            self._pairings[age_index] = generator.permutation(len(self._realizations))
        return self._pairings[age_index]

    def prepare(self, n_ages: int) -> None:
        """Compute every age's pairing before cells run concurrently."""
        for age_index in range(n_ages):
            self.pairing(age_index)

    def __call__(self, age_index: int, trial_index: int,
                 rng: RngHandle) -> Tuple[InterArrivalSequence, InterArrivalSequence]:
        order = self.pairing(age_index)
        return (self._realizations[order[2 * trial_index]],
                self._realizations[order[2 * trial_index + 1]])


def realizations_summary(realizations: List[InterArrivalSequence]) -> Tuple[int, float, float]:
    """Waiting times per realization, their mean and their 1st percentile."""
    taus = np.concatenate([r.taus for r in realizations]) if realizations else np.empty(0)
    if taus.size == 0:
        raise ConfigurationError("Realizations hold no waiting times")
    L = int(round(np.mean([len(r) for r in realizations])))
    return L, float(taus.mean()), float(np.percentile(taus, 1))
