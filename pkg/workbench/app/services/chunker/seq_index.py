"""
Indexed SeqCDC simulator.

Instead of walking byte pairs, the simulator precomputes with numpy where the
next qualifying sequence starts and where every opposing pair lies, then jumps
from event to event: a chunk costs one lookup per skip plus one for its
boundary. Boundaries are identical to ``seq_reference``; the tuner and the
large-volume experiments use it to keep CPython runtimes reasonable.
"""

import logging
from typing import List, Optional

import numpy as np

from .seqcdc import orient
from ...core.exceptions import ConfigurationError
from ...models import BoundaryEvent, BoundaryKind, ChunkerConfig, SeqParams

logger = logging.getLogger(__name__)


class SeqIndex:
    """
    Precomputed pair relations of one stream.

    The index depends only on seq_length and mode; skip parameters can be
    varied per call, which is what the tuner does.
    """

    def __init__(self, data, params: SeqParams):
        self.params = params
        lanes = np.frombuffer(orient(data, params.mode), dtype=np.uint8)
        self.n = len(lanes)
        seq_length = params.seq_length
        # positions fit in int32 for any segment the tuner builds
        position_type = np.int32 if self.n < 2**31 else np.int64

        pairs_a = lanes[:-1]
        pairs_b = lanes[1:]
        extends = pairs_b > pairs_a
        # searched with np.int64 cursors; a dtype mismatch copies the array per call
        self.opposing_positions = np.flatnonzero(pairs_b < pairs_a).astype(np.int64)

        # qualifying[j]: pairs j .. j + seq_length - 2 all extend
        run_window = seq_length - 1
        if self.n >= seq_length:
            prefix = np.concatenate(([0], np.cumsum(extends, dtype=np.int64)))
            qualifying = (prefix[run_window:] - prefix[:-run_window]) == run_window
            del prefix
            starts = np.where(
                qualifying, np.arange(len(qualifying), dtype=position_type), self.n
            ).astype(position_type)
            self.next_start = np.minimum.accumulate(starts[::-1])[::-1]
        else:
            self.next_start = np.empty(0, dtype=position_type)

    def _params_for(self, params: Optional[SeqParams]) -> SeqParams:
        if params is None:
            return self.params
        if params.seq_length != self.params.seq_length or params.mode != self.params.mode:
            raise ConfigurationError(
                "Index was built for seq_length "
                f"{self.params.seq_length} ({self.params.mode.value}), "
                f"got {params.seq_length} ({params.mode.value})"
            )
        return params

    def _next_sequence_start(self, cursor: int) -> int:
        if cursor < len(self.next_start):
            return int(self.next_start[cursor])
        return self.n

    def _trigger_pair(self, cursor: int, skip_trigger: int) -> int:
        """Index of the pair that reaches skip_trigger when counting from cursor."""
        first = int(np.searchsorted(self.opposing_positions, np.int64(cursor)))
        rank = first + skip_trigger - 1
        if rank < len(self.opposing_positions):
            return int(self.opposing_positions[rank])
        return self.n

    def find_boundary(
        self,
        start: int,
        min_size: int,
        max_size: int,
        params: Optional[SeqParams] = None,
    ) -> BoundaryEvent:
        params = self._params_for(params)
        n = self.n
        limit = start + max_size
        end = min(limit, n)
        seq_length = params.seq_length
        trigger = params.skip_trigger
        cursor = start + min_size - seq_length

        while True:
            seq_start = self._next_sequence_start(cursor)
            if trigger is not None:
                pair = self._trigger_pair(cursor, trigger)
                if pair <= end - 2 and pair < seq_start:
                    cursor = pair + 1 + params.skip_size
                    continue
            if seq_start + seq_length <= end:
                return BoundaryEvent(BoundaryKind.SEQUENCE, seq_start + seq_length)
            break

        if limit < n:
            return BoundaryEvent(BoundaryKind.MAX_FORCED, limit)
        return BoundaryEvent(BoundaryKind.END_OF_STREAM, n)

    def chunk(
        self, min_size: int, max_size: int, params: Optional[SeqParams] = None
    ) -> List[BoundaryEvent]:
        params = self._params_for(params)
        events: List[BoundaryEvent] = []
        start = 0
        while start < self.n:
            event = self.find_boundary(start, min_size, max_size, params)
            events.append(event)
            start = event.position
        return events

    def lengths(
        self,
        min_size: int,
        max_size: int,
        params: Optional[SeqParams] = None,
        include_final: bool = False,
    ) -> np.ndarray:
        """
        Chunk lengths of the stream.

        The trailing EndOfStream chunk is left out unless ``include_final`` is
        set, so fixed-size samples do not bias the mean downwards.
        """
        events = self.chunk(min_size, max_size, params)
        positions = np.fromiter((event.position for event in events), dtype=np.int64)
        lengths = np.diff(positions, prepend=0)
        if not include_final and events and events[-1].kind == BoundaryKind.END_OF_STREAM:
            lengths = lengths[:-1]
        return lengths


def seq_index_chunk(data, cfg: ChunkerConfig) -> List[BoundaryEvent]:
    return SeqIndex(data, cfg.seq).chunk(cfg.min_size, cfg.max_size)


def simulate_chunk_lengths(
    data, params: SeqParams, min_size: int, max_size: int, include_final: bool = False
) -> np.ndarray:
    """Chunk lengths SeqCDC produces on ``data`` (see ``SeqIndex.lengths``)."""
    lengths = SeqIndex(data, params).lengths(min_size, max_size, include_final=include_final)
    logger.debug(f"Simulated {len(lengths)} chunks over {len(data)} bytes")
    return lengths
