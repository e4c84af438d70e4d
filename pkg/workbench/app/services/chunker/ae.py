"""
Asymmetric Extremum (AE) chunking.

The extreme point is the first byte that is strictly greater than every byte
before it in the chunk; ties do not move it. Once ``window_size`` further bytes
have passed without a new extreme point, the chunk ends after the current byte.
"""

from typing import List

from .base import BaseChunker, Buffer
from ...models import BoundaryEvent, BoundaryKind, ChunkerConfig


def ae_find_boundary(
    data: bytes, start: int, window_size: int, min_size: int, max_size: int
) -> BoundaryEvent:
    n = len(data)
    limit = start + max_size
    end = min(limit, n)
    max_value = data[start]
    max_pos = start
    for i in range(start + 1, end):
        value = data[i]
        if value > max_value:
            max_value = value
            max_pos = i
        elif i - max_pos >= window_size and i + 1 - start >= min_size:
            return BoundaryEvent(BoundaryKind.SEQUENCE, i + 1)

    if limit < n:
        return BoundaryEvent(BoundaryKind.MAX_FORCED, limit)
    return BoundaryEvent(BoundaryKind.END_OF_STREAM, n)


def ae_chunk(data: Buffer, cfg: ChunkerConfig) -> List[BoundaryEvent]:
    raw = bytes(data)
    window_size = cfg.extremum.window_size
    events: List[BoundaryEvent] = []
    start = 0
    while start < len(raw):
        event = ae_find_boundary(raw, start, window_size, cfg.min_size, cfg.max_size)
        events.append(event)
        start = event.position
    return events


class AEChunker(BaseChunker):
    def chunk(self, data: Buffer) -> List[BoundaryEvent]:
        return ae_chunk(data, self.cfg)
