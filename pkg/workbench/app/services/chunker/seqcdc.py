"""
Scalar SeqCDC.

A boundary is the end of a run of ``seq_length`` bytes that is strictly
increasing (or decreasing). Each chunk starts by jumping over its sub-minimum
region, and ``skip_trigger`` opposing byte pairs make the scanner jump
``skip_size`` bytes ahead.

Two scanners live here: the optimized one used by ``seq_chunk`` and a naive
reference that is the oracle for every other SeqCDC implementation.
"""

from dataclasses import dataclass
import logging
from typing import List, Optional, Tuple

from .base import BaseChunker, Buffer
from ...models import BoundaryEvent, BoundaryKind, ChunkerConfig, SeqMode, SeqParams

logger = logging.getLogger(__name__)

_COMPLEMENT = bytes(range(255, -1, -1))


@dataclass
class ScanState:
    """Counters of an in-progress scan, reset at chunk start and after each skip."""

    run_len: int = 1
    opposing_count: int = 0
    cursor: int = 0


def orient(data: Buffer, mode: SeqMode) -> bytes:
    """
    Bytes on which an increasing-mode scan is equivalent to scanning ``data``
    in ``mode``: decreasing runs of data are increasing runs of 255 - b.
    """
    raw = bytes(data)
    if mode == SeqMode.DECREASING:
        return raw.translate(_COMPLEMENT)
    return raw


def scan_increasing(
    data: bytes,
    cursor: int,
    run_len: int,
    opposing: int,
    end: int,
    seq_length: int,
    skip_trigger: Optional[int],
    skip_size: int,
) -> Optional[int]:
    """
    Scan adjacent pairs from ``cursor`` up to the last pair ending before ``end``.

    Returns the boundary offset (one past the run's last byte), or None if the
    region holds no qualifying run.
    """
    last_pair = end - 2
    trigger = skip_trigger if skip_trigger is not None else -1
    i = cursor
    run = run_len
    opp = opposing
    while i <= last_pair:
        a = data[i]
        b = data[i + 1]
        if b > a:
            run += 1
            if run == seq_length:
                return i + 2
        elif b < a:
            run = 1
            opp += 1
            if opp == trigger:
                # land skip_size bytes past the second byte of the pair
                i += 1 + skip_size
                opp = 0
                continue
        else:
            run = 1
        i += 1
    return None


def _find_boundary(
    oriented: bytes, start: int, params: SeqParams, min_size: int, max_size: int
) -> BoundaryEvent:
    n = len(oriented)
    limit = start + max_size
    end = min(limit, n)
    position = scan_increasing(
        oriented,
        start + min_size - params.seq_length,
        1,
        0,
        end,
        params.seq_length,
        params.skip_trigger,
        params.skip_size,
    )
    if position is not None:
        return BoundaryEvent(BoundaryKind.SEQUENCE, position)
    if limit < n:
        return BoundaryEvent(BoundaryKind.MAX_FORCED, limit)
    return BoundaryEvent(BoundaryKind.END_OF_STREAM, n)


def seq_find_boundary(
    data: Buffer, start: int, params: SeqParams, min_size: int, max_size: int
) -> BoundaryEvent:
    """
    Find the boundary ending the chunk that begins at ``start``.

    Only the chunk's own bytes are examined, so the result does not depend on
    anything before ``start``.
    """
    window = orient(memoryview(data)[start : start + max_size], params.mode)
    event = _find_boundary(window, 0, params, min_size, max_size)
    kind = event.kind
    if kind == BoundaryKind.END_OF_STREAM and start + max_size < len(data):
        kind = BoundaryKind.MAX_FORCED
    return BoundaryEvent(kind, start + event.position)


def seq_chunk(data: Buffer, cfg: ChunkerConfig) -> List[BoundaryEvent]:
    """Chunk a whole stream with the optimized scalar scanner."""
    oriented = orient(data, cfg.seq.mode)
    n = len(oriented)
    events: List[BoundaryEvent] = []
    start = 0
    while start < n:
        event = _find_boundary(oriented, start, cfg.seq, cfg.min_size, cfg.max_size)
        events.append(event)
        start = event.position
    return events


class ReferenceSeqScanner:
    """
    Byte-at-a-time SeqCDC written for obviousness, not speed.

    Every skip is recorded as (second byte of the triggering pair, landing offset).
    """

    def __init__(self, data: Buffer, params: SeqParams, min_size: int, max_size: int):
        self.data = bytes(data)
        self.params = params
        self.min_size = min_size
        self.max_size = max_size
        self.skips: List[Tuple[int, int]] = []

    def _relation(self, current: int, following: int) -> str:
        if current == following:
            return "equal"
        rising = following > current
        if self.params.mode == SeqMode.INCREASING:
            return "extend" if rising else "oppose"
        return "oppose" if rising else "extend"

    def find_boundary(self, start: int) -> BoundaryEvent:
        data = self.data
        n = len(data)
        limit = start + self.max_size
        end = min(limit, n)
        seq_length = self.params.seq_length
        trigger = self.params.skip_trigger

        state = ScanState(
            run_len=1, opposing_count=0, cursor=start + self.min_size - seq_length
        )
        # a pair (cursor, cursor + 1) is only examined if both bytes are in the chunk
        while state.cursor + 1 < end:
            relation = self._relation(data[state.cursor], data[state.cursor + 1])
            if relation == "extend":
                state.run_len += 1
                if state.run_len == seq_length:
                    return BoundaryEvent(BoundaryKind.SEQUENCE, state.cursor + 2)
                state.cursor += 1
            elif relation == "oppose":
                state.run_len = 1
                state.opposing_count += 1
                if trigger is not None and state.opposing_count == trigger:
                    landing = state.cursor + 1 + self.params.skip_size
                    self.skips.append((state.cursor + 1, landing))
                    state.cursor = landing
                    state.opposing_count = 0
                else:
                    state.cursor += 1
            else:
                state.run_len = 1
                state.cursor += 1

        if limit < n:
            return BoundaryEvent(BoundaryKind.MAX_FORCED, limit)
        return BoundaryEvent(BoundaryKind.END_OF_STREAM, n)

    def chunk(self) -> List[BoundaryEvent]:
        events = []
        start = 0
        while start < len(self.data):
            event = self.find_boundary(start)
            events.append(event)
            start = event.position
        return events


def seq_reference(data: Buffer, cfg: ChunkerConfig) -> List[BoundaryEvent]:
    """Oracle: boundaries from the naive reference scanner."""
    return ReferenceSeqScanner(data, cfg.seq, cfg.min_size, cfg.max_size).chunk()


class SeqChunker(BaseChunker):
    """Scalar SeqCDC chunker."""

    def chunk(self, data: Buffer) -> List[BoundaryEvent]:
        return seq_chunk(data, self.cfg)
