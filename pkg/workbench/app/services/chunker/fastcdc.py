"""
FastCDC with normalized chunking.

The Gear hash restarts at each chunk's min_size offset (sub-minimum skipping).
Up to target_avg a stricter mask (more bits) is applied, after it a relaxed
one, which pulls chunk sizes towards the target.
"""

import logging
from typing import List

from .base import BaseChunker, Buffer
from .gear import top_bits_mask
from ...core.constants import GEAR_TABLE, MASK64
from ...models import BoundaryEvent, BoundaryKind, ChunkerConfig

logger = logging.getLogger(__name__)


def fastcdc_find_boundary(
    data: bytes,
    start: int,
    min_size: int,
    target_avg: int,
    max_size: int,
    strict_mask: int,
    relaxed_mask: int,
) -> BoundaryEvent:
    n = len(data)
    limit = start + max_size
    end = min(limit, n)
    normal = min(start + target_avg, end)
    table = GEAR_TABLE
    h = 0

    i = start + min_size
    while i < normal:
        h = ((h << 1) + table[data[i]]) & MASK64
        i += 1
        if not h & strict_mask:
            return BoundaryEvent(BoundaryKind.SEQUENCE, i)
    while i < end:
        h = ((h << 1) + table[data[i]]) & MASK64
        i += 1
        if not h & relaxed_mask:
            return BoundaryEvent(BoundaryKind.SEQUENCE, i)

    if limit < n:
        return BoundaryEvent(BoundaryKind.MAX_FORCED, limit)
    return BoundaryEvent(BoundaryKind.END_OF_STREAM, n)


def fastcdc_chunk(data: Buffer, cfg: ChunkerConfig) -> List[BoundaryEvent]:
    raw = bytes(data)
    strict_mask = top_bits_mask(cfg.hashing.strict_bits)
    relaxed_mask = top_bits_mask(cfg.hashing.relaxed_bits)
    events: List[BoundaryEvent] = []
    start = 0
    while start < len(raw):
        event = fastcdc_find_boundary(
            raw,
            start,
            cfg.min_size,
            cfg.target_avg,
            cfg.max_size,
            strict_mask,
            relaxed_mask,
        )
        events.append(event)
        start = event.position
    return events


class FastCDCChunker(BaseChunker):
    def chunk(self, data: Buffer) -> List[BoundaryEvent]:
        return fastcdc_chunk(data, self.cfg)
