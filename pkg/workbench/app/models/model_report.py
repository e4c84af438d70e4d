# models/model_report.py
from pydantic import BaseModel, Field
from typing import List, Dict, Any, Optional

from .model_chunking import SeqParams


class HistogramBucket(BaseModel):
    lower: int = Field(..., description="Inclusive lower chunk length")
    upper: int = Field(..., description="Upper chunk length (inclusive for the last bucket)")
    count: int = Field(..., description="Chunks whose length falls in the bucket")


class SizeQuantiles(BaseModel):
    p1: float
    p25: float
    p50: float
    p75: float
    p99: float


class SizeHistogram(BaseModel):
    buckets: List[HistogramBucket] = Field(default_factory=list)
    quantiles: Optional[SizeQuantiles] = Field(
        None, description="Exact quantiles of chunk lengths"
    )
    mean: float = Field(0.0, description="Mean chunk length in bytes")
    count: int = Field(0, description="Number of chunks")


class ThroughputStats(BaseModel):
    runs: List[float] = Field(default_factory=list, description="GB/s per timed run")
    mean: float = Field(0.0, description="Mean GB/s")
    stddev: float = Field(0.0, description="Sample standard deviation in GB/s")
    backend: str = Field("scalar", description="Backend actually used")

    @property
    def relative_stddev(self) -> float:
        return self.stddev / self.mean if self.mean else 0.0


class FileFailure(BaseModel):
    path: str
    error: str


class DedupReport(BaseModel):
    file_count: int = Field(0, description="Files chunked successfully")
    total_bytes: int = Field(0, description="Bytes of all chunks")
    chunk_count: int = Field(0, description="Chunks produced")
    unique_chunks: int = Field(0, description="Chunks with a new fingerprint")
    unique_bytes: int = Field(0, description="Bytes of unique chunks")
    space_savings: float = Field(0.0, description="(total - unique) / total")
    mean_chunk: float = Field(0.0, description="Mean chunk length in bytes")
    metadata_bytes: int = Field(
        0, description="Fingerprint metadata: chunk references plus index entries"
    )
    histogram: SizeHistogram = Field(default_factory=SizeHistogram)
    backend: str = Field("scalar", description="Backend actually used")
    errors: List[FileFailure] = Field(default_factory=list)


class RunReport(BaseModel):
    corpus: str = Field(..., description="Corpus identifier")
    algorithm: str
    params: Dict[str, Any] = Field(default_factory=dict)
    total_bytes: int = 0
    chunk_count: int = 0
    unique_chunks: int = 0
    unique_bytes: int = 0
    space_savings: float = 0.0
    mean_chunk: float = 0.0
    histogram: List[HistogramBucket] = Field(default_factory=list)
    quantiles: Optional[SizeQuantiles] = None
    metadata_bytes: int = 0
    throughput: ThroughputStats = Field(default_factory=ThroughputStats)
    backend: str = "scalar"
    host: Dict[str, Any] = Field(default_factory=dict)
    version: str = ""
    errors: List[FileFailure] = Field(default_factory=list)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.model_validate_json(text)


class TunerCandidate(BaseModel):
    params: SeqParams
    simulated_mean: float
    simulated_p50: float
    chunk_count: int
    validated: bool = Field(
        False, description="Stats come from the full sample, not the search sample"
    )

    def error(self, target_avg: int) -> float:
        return abs(self.simulated_mean - target_avg)


class TunerResult(BaseModel):
    target_avg: int
    sample_size: int
    candidates: List[TunerCandidate] = Field(
        ...,
        description=(
            "Validated finalists, then the remaining search points; each group "
            "ordered by distance to the target"
        ),
    )
    chosen: SeqParams
    reference: Optional[TunerCandidate] = Field(
        None, description="Shipped default parameters evaluated on the same sample"
    )


class BitOpTiming(BaseModel):
    primitive: str
    ns_per_op: float = Field(..., description="Mean latency per call in nanoseconds")
    mops: float = Field(..., description="Million calls per second")
    correct: bool = Field(..., description="Correctness lane agreed with the bit-walk oracle")
