from .rng import RngHandle
from .sequences import (
    EventSequence,
    InterArrivalSequence,
    count_in,
    from_interarrivals,
    shuffle,
    to_interarrivals,
)
from .sequence_loader import InputMode, SequenceLoader, write_sequence

__all__ = [
    'RngHandle', 'EventSequence', 'InterArrivalSequence', 'count_in',
    'from_interarrivals', 'shuffle', 'to_interarrivals',
    'InputMode', 'SequenceLoader', 'write_sequence',
]
