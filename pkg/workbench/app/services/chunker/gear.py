"""
Gear chunking: h = (h << 1) + GEAR_TABLE[b] over a 64-bit state.

Every byte shifts older contributions one bit left, so after 64 bytes they have
left the state entirely. A position is a candidate when the top ``mask_bits``
bits are zero.
"""

from typing import Iterator, List

from .base import BaseChunker, Buffer
from .limits import enforce_limits
from ...core.constants import GEAR_TABLE, MASK64
from ...models import BoundaryEvent, ChunkerConfig


def top_bits_mask(bits: int) -> int:
    return (MASK64 >> (64 - bits)) << (64 - bits)


def gear_candidates(data: Buffer, mask_bits: int) -> Iterator[int]:
    mask = top_bits_mask(mask_bits)
    table = GEAR_TABLE
    h = 0
    for i, b in enumerate(bytes(data)):
        h = ((h << 1) + table[b]) & MASK64
        if not h & mask:
            yield i + 1


def gear_chunk(data: Buffer, cfg: ChunkerConfig) -> List[BoundaryEvent]:
    candidates = gear_candidates(data, cfg.hashing.mask_bits)
    return enforce_limits(candidates, cfg.min_size, cfg.max_size, len(data))


class GearChunker(BaseChunker):
    def chunk(self, data: Buffer) -> List[BoundaryEvent]:
        return gear_chunk(data, self.cfg)
