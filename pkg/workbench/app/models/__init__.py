# models/__init__.py
from .model_chunking import (
    Algorithm,
    SeqMode,
    BoundaryKind,
    SeqParams,
    HashChunkerParams,
    ExtremumParams,
    ChunkerConfig,
    BoundaryEvent,
    ChunkRecord,
    make_config,
)
from .model_report import (
    HistogramBucket,
    SizeQuantiles,
    SizeHistogram,
    ThroughputStats,
    FileFailure,
    DedupReport,
    RunReport,
    TunerCandidate,
    TunerResult,
    BitOpTiming,
)
from .model_corpus import MutationOp, MutationSpec, CorpusManifest

__all__ = [
    "Algorithm",
    "SeqMode",
    "BoundaryKind",
    "SeqParams",
    "HashChunkerParams",
    "ExtremumParams",
    "ChunkerConfig",
    "BoundaryEvent",
    "ChunkRecord",
    "make_config",
    "HistogramBucket",
    "SizeQuantiles",
    "SizeHistogram",
    "ThroughputStats",
    "FileFailure",
    "DedupReport",
    "RunReport",
    "TunerCandidate",
    "TunerResult",
    "BitOpTiming",
    "MutationOp",
    "MutationSpec",
    "CorpusManifest",
]
