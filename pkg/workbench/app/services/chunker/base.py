from abc import ABC, abstractmethod
from typing import List, Union

from ...models import BoundaryEvent, ChunkerConfig

Buffer = Union[bytes, bytearray, memoryview]


class BaseChunker(ABC):
    """
    Abstract base class for chunkers.
    Every algorithm turns a whole in-memory stream into boundary events that
    tile [0, len(data)].
    """

    backend = "scalar"

    def __init__(self, cfg: ChunkerConfig):
        self.cfg = cfg

    @abstractmethod
    def chunk(self, data: Buffer) -> List[BoundaryEvent]:
        """
        Produce the boundaries of one stream.

        Args:
            data: Complete stream content

        Returns:
            Boundary events with strictly increasing positions, the last one
            at len(data)
        """
        pass
