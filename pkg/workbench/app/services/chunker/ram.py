"""
Rapid Asymmetric Maximum (RAM) chunking.

The first ``window_size`` bytes of a chunk fix a maximum; the chunk ends after
the first later byte strictly greater than it. Scanning never cuts inside the
sub-minimum region. A window holding 0xFF can never be exceeded, so such chunks
end at max_size.
"""

from typing import List

import numpy as np

from .base import BaseChunker, Buffer
from ...models import BoundaryEvent, BoundaryKind, ChunkerConfig


def ram_find_boundary(
    lanes: np.ndarray, start: int, window_size: int, min_size: int, max_size: int
) -> BoundaryEvent:
    n = len(lanes)
    limit = start + max_size
    end = min(limit, n)
    window_max = lanes[start : start + window_size].max()
    scan_from = max(start + window_size, start + min_size - 1)
    if scan_from < end:
        above = np.flatnonzero(lanes[scan_from:end] > window_max)
        if len(above):
            return BoundaryEvent(BoundaryKind.SEQUENCE, scan_from + int(above[0]) + 1)

    if limit < n:
        return BoundaryEvent(BoundaryKind.MAX_FORCED, limit)
    return BoundaryEvent(BoundaryKind.END_OF_STREAM, n)


def ram_chunk(data: Buffer, cfg: ChunkerConfig) -> List[BoundaryEvent]:
    lanes = np.frombuffer(bytes(data), dtype=np.uint8)
    window_size = cfg.extremum.window_size
    events: List[BoundaryEvent] = []
    start = 0
    while start < len(lanes):
        event = ram_find_boundary(lanes, start, window_size, cfg.min_size, cfg.max_size)
        events.append(event)
        start = event.position
    return events


class RAMChunker(BaseChunker):
    def chunk(self, data: Buffer) -> List[BoundaryEvent]:
        return ram_chunk(data, self.cfg)
