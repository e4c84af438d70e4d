"""
Lane-parallel SeqCDC.

Each block compares ``w`` adjacent byte pairs at once: ``seq_length`` views
of the data at offsets 0..seq_length-1 give seq_length-1 "extends" masks whose
AND marks the lanes where a qualifying sequence starts, and one "opposes"
mask over the first two views counts opposing pairs for content-defined
skipping. Events inside a block are resolved in byte order so the result is
identical to the scalar scanner.
"""

from dataclasses import dataclass
from enum import IntEnum
import logging
from typing import List, Optional

import numpy as np

from .base import BaseChunker, Buffer
from .bitops import first_set_bit, low_bits, popcount, select_kth_set_bit
from .seqcdc import ScanState, orient, scan_increasing
from ...core.exceptions import ChunkingError
from ...models import BoundaryEvent, BoundaryKind, ChunkerConfig, SeqMode, SeqParams

logger = logging.getLogger(__name__)


class LaneWidth(IntEnum):
    W16 = 16
    W32 = 32
    W64 = 64


@dataclass
class BlockScanResult:
    boundary_bit: Optional[int]  # lane where the first qualifying sequence starts
    opposing_mask: int
    opposing_total_after: int
    consumed: int
    skip_bit: Optional[int] = None  # lane of the pair that reached skip_trigger
    inc_mask: int = 0


def as_lanes(data) -> np.ndarray:
    if isinstance(data, np.ndarray):
        return data
    return np.frombuffer(bytes(data), dtype=np.uint8)


def to_mask(lanes: np.ndarray) -> int:
    """Pack a boolean lane vector into an int, lane 0 in bit 0."""
    return int.from_bytes(np.packbits(lanes, bitorder="little").tobytes(), "little")


def carried_run(inc_mask: int, width: int, prior: int) -> int:
    """Run length through the byte after a fully consumed block."""
    full = low_bits(width)
    if inc_mask & full == full:
        return prior + width
    highest_break = (~inc_mask & full).bit_length() - 1
    return width - highest_break


def scan_block(
    data,
    pos: int,
    params: SeqParams,
    state: ScanState,
    w: int,
    end: Optional[int] = None,
) -> BlockScanResult:
    """
    Scan the ``w`` pairs starting at ``pos``.

    Lanes whose sequence or pair would reach past ``end`` are masked off.
    Opposing pairs at or after the first qualifying sequence are not counted.
    """
    lanes = as_lanes(data)
    width = int(w)
    seq_length = params.seq_length
    if pos + width + seq_length - 1 > len(lanes):
        raise ChunkingError(
            f"Block at {pos} needs {width + seq_length - 1} bytes, "
            f"only {len(lanes) - pos} remain"
        )
    end = len(lanes) if end is None else end

    views = [lanes[pos + k : pos + k + width] for k in range(seq_length)]
    if params.mode == SeqMode.INCREASING:
        extends, opposes = np.greater, np.less
    else:
        extends, opposes = np.less, np.greater

    inc = extends(views[1], views[0])
    combined = inc.copy()
    for k in range(1, seq_length - 1):
        combined &= extends(views[k + 1], views[k])

    seq_valid = low_bits(min(width, end - seq_length - pos + 1))
    pair_valid = low_bits(min(width, end - 1 - pos))
    combined_mask = to_mask(combined) & seq_valid
    opposing_mask = to_mask(opposes(views[1], views[0])) & pair_valid
    inc_mask = to_mask(inc) & pair_valid

    boundary_bit = first_set_bit(combined_mask)
    counted = opposing_mask
    if boundary_bit is not None:
        counted &= low_bits(boundary_bit)

    total = state.opposing_count
    trigger = params.skip_trigger
    if trigger is not None and total + popcount(counted) >= trigger:
        skip_bit = select_kth_set_bit(counted, trigger - total)
        return BlockScanResult(
            boundary_bit=None,
            opposing_mask=opposing_mask,
            opposing_total_after=trigger,
            consumed=skip_bit + 1,
            skip_bit=skip_bit,
            inc_mask=inc_mask,
        )

    total += popcount(counted)
    if boundary_bit is not None:
        return BlockScanResult(boundary_bit, opposing_mask, total, boundary_bit, None, inc_mask)
    return BlockScanResult(None, opposing_mask, total, width, None, inc_mask)


def _accel_find_boundary(
    lanes: np.ndarray,
    oriented: bytes,
    start: int,
    params: SeqParams,
    min_size: int,
    max_size: int,
    width: int,
) -> BoundaryEvent:
    n = len(lanes)
    limit = start + max_size
    end = min(limit, n)
    seq_length = params.seq_length
    state = ScanState(run_len=1, opposing_count=0, cursor=start + min_size - seq_length)

    while state.cursor <= end - 2:
        pos = state.cursor
        if pos + width + seq_length - 1 > n:
            # tail shorter than a block: finish with the scalar scanner
            position = scan_increasing(
                oriented,
                pos,
                state.run_len,
                state.opposing_count,
                end,
                seq_length,
                params.skip_trigger,
                params.skip_size,
            )
            if position is not None:
                return BoundaryEvent(BoundaryKind.SEQUENCE, position)
            break

        result = scan_block(lanes, pos, params, state, width, end=end)
        if result.skip_bit is not None:
            state.cursor = pos + result.skip_bit + 1 + params.skip_size
            state.run_len = 1
            state.opposing_count = 0
            continue
        if result.boundary_bit is not None:
            return BoundaryEvent(BoundaryKind.SEQUENCE, pos + result.boundary_bit + seq_length)

        state.opposing_count = result.opposing_total_after
        state.run_len = min(
            carried_run(result.inc_mask, width, state.run_len), seq_length - 1
        )
        state.cursor = pos + width

    if limit < n:
        return BoundaryEvent(BoundaryKind.MAX_FORCED, limit)
    return BoundaryEvent(BoundaryKind.END_OF_STREAM, n)


def accel_chunk(data: Buffer, cfg: ChunkerConfig, w: int) -> List[BoundaryEvent]:
    """
    Chunk a whole stream with ``w``-byte blocks.

    Boundary-for-boundary identical to ``seq_reference`` for every width.
    """
    width = int(LaneWidth(int(w)))
    raw = bytes(data)
    lanes = as_lanes(raw)
    oriented = orient(raw, cfg.seq.mode)
    events: List[BoundaryEvent] = []
    start = 0
    while start < len(raw):
        event = _accel_find_boundary(
            lanes, oriented, start, cfg.seq, cfg.min_size, cfg.max_size, width
        )
        events.append(event)
        start = event.position
    return events


class AcceleratedSeqChunker(BaseChunker):
    """SeqCDC chunker scanning ``width`` bytes per block."""

    def __init__(self, cfg: ChunkerConfig, width: int):
        super().__init__(cfg)
        self.width = int(LaneWidth(int(width)))
        self.backend = f"w{self.width}"

    def chunk(self, data: Buffer) -> List[BoundaryEvent]:
        return accel_chunk(data, self.cfg, self.width)
