from typing import List

from .base import BaseChunker, Buffer
from ...models import BoundaryEvent, BoundaryKind, ChunkerConfig


def fixed_chunk(data: Buffer, cfg: ChunkerConfig) -> List[BoundaryEvent]:
    """Cut every target_avg bytes; the last chunk takes whatever is left."""
    length = len(data)
    step = cfg.target_avg
    events = [
        BoundaryEvent(BoundaryKind.MAX_FORCED, position)
        for position in range(step, length, step)
    ]
    if length:
        events.append(BoundaryEvent(BoundaryKind.END_OF_STREAM, length))
    return events


class FixedChunker(BaseChunker):
    def chunk(self, data: Buffer) -> List[BoundaryEvent]:
        return fixed_chunk(data, self.cfg)
