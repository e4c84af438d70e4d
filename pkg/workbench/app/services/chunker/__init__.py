# app/services/chunker/__init__.py
import logging
from typing import List, Optional

from .ae import AEChunker, ae_chunk
from .base import BaseChunker, Buffer
from .factory import ChunkerFactory
from .fastcdc import FastCDCChunker, fastcdc_chunk
from .fixed import FixedChunker, fixed_chunk
from .gear import GearChunker, gear_chunk
from .limits import audit_events, chunk_lengths, enforce_limits
from .rabin import RabinChunker, RabinHash, rabin_chunk
from .ram import RAMChunker, ram_chunk
from .seq_index import SeqIndex, seq_index_chunk, simulate_chunk_lengths
from .seqcdc import ReferenceSeqScanner, SeqChunker, seq_chunk, seq_find_boundary, seq_reference
from .seqcdc_accel import AcceleratedSeqChunker, LaneWidth, accel_chunk, scan_block
from ..fingerprint import fingerprint
from ...core.exceptions import ConfigurationError
from ...models import Algorithm, BoundaryEvent, ChunkerConfig, ChunkRecord

logger = logging.getLogger(__name__)


def register_chunkers():
    """Register all chunking algorithms."""
    chunkers_map = {
        Algorithm.FIXED: FixedChunker,
        Algorithm.RABIN: RabinChunker,
        Algorithm.GEAR: GearChunker,
        Algorithm.FASTCDC: FastCDCChunker,
        Algorithm.AE: AEChunker,
        Algorithm.RAM: RAMChunker,
        Algorithm.SEQ: SeqChunker,
    }
    for algorithm, chunker_class in chunkers_map.items():
        ChunkerFactory.register_chunker(algorithm, chunker_class)
    logger.debug(f"Available chunkers: {[a.value for a in ChunkerFactory._chunkers]}")


register_chunkers()


def chunk_stream(
    data: Buffer, cfg: ChunkerConfig, backend: Optional[str] = "scalar"
) -> List[BoundaryEvent]:
    """
    Boundaries of one in-memory stream.

    Args:
        data: Stream content, non-empty
        cfg: Validated configuration
        backend: SeqCDC backend (auto|scalar|w16|w32|w64); ignored by baselines

    Raises:
        ConfigurationError: If data is empty or the configuration is unusable
    """
    if not isinstance(cfg, ChunkerConfig):
        raise ConfigurationError(f"Expected ChunkerConfig, got {type(cfg).__name__}")
    if len(data) == 0:
        raise ConfigurationError("Cannot chunk an empty stream")
    return ChunkerFactory.get_chunker(cfg, backend).chunk(data)


def chunk_records(data: Buffer, events: List[BoundaryEvent]) -> List[ChunkRecord]:
    """Fingerprinted (offset, length) records for a boundary list."""
    view = memoryview(data)
    records = []
    offset = 0
    for event in events:
        records.append(
            ChunkRecord(offset, event.position - offset, fingerprint(view[offset : event.position]))
        )
        offset = event.position
    return records


__all__ = [
    "AEChunker",
    "AcceleratedSeqChunker",
    "BaseChunker",
    "ChunkerFactory",
    "FastCDCChunker",
    "FixedChunker",
    "GearChunker",
    "LaneWidth",
    "RAMChunker",
    "RabinChunker",
    "RabinHash",
    "ReferenceSeqScanner",
    "SeqChunker",
    "SeqIndex",
    "accel_chunk",
    "ae_chunk",
    "audit_events",
    "chunk_lengths",
    "chunk_records",
    "chunk_stream",
    "enforce_limits",
    "fastcdc_chunk",
    "fixed_chunk",
    "gear_chunk",
    "rabin_chunk",
    "ram_chunk",
    "register_chunkers",
    "scan_block",
    "seq_chunk",
    "seq_find_boundary",
    "seq_index_chunk",
    "seq_reference",
    "simulate_chunk_lengths",
]
