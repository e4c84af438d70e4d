from dataclasses import dataclass, field
from typing import List, Dict, Any, Iterable, Optional, Sequence
import numpy as np
import logging

from app.core.config import settings
from app.core.exceptions import DedupError
from app.models import HistogramBucket, SizeHistogram, SizeQuantiles, ThroughputStats

logger = logging.getLogger(__name__)

QUANTILE_LEVELS = (1, 25, 50, 75, 99)


def space_savings(total_bytes: int, unique_bytes: int) -> float:
    """
    Fraction of bytes removed by deduplication: (total - unique) / total.

    Raises:
        DedupError: If total_bytes is not positive or unique_bytes is out of range
    """
    if total_bytes <= 0:
        raise DedupError("Space savings undefined for an empty corpus")
    if not 0 <= unique_bytes <= total_bytes:
        raise DedupError(
            f"unique_bytes {unique_bytes} must lie within [0, {total_bytes}]"
        )
    return (total_bytes - unique_bytes) / total_bytes


def build_histogram(
    lengths: Sequence[int],
    bins: Optional[int] = None,
    lower: Optional[int] = None,
    upper: Optional[int] = None,
) -> SizeHistogram:
    """
    Bucketed chunk-length counts plus exact quantiles.

    Bucket edges span [lower, upper] (min and max of the lengths by default)
    in equal steps; counts always sum to len(lengths).
    """
    values = np.asarray(lengths, dtype=np.int64)
    if values.size == 0:
        return SizeHistogram()

    bins = bins or settings.histogram_bins
    lo = int(values.min()) if lower is None else min(lower, int(values.min()))
    hi = int(values.max()) if upper is None else max(upper, int(values.max()))
    if hi == lo:
        hi = lo + 1
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))

    buckets = [
        HistogramBucket(lower=int(edges[i]), upper=int(edges[i + 1]), count=int(counts[i]))
        for i in range(len(counts))
    ]
    quantiles = np.percentile(values, QUANTILE_LEVELS)
    return SizeHistogram(
        buckets=buckets,
        quantiles=SizeQuantiles(
            **{f"p{level}": float(q) for level, q in zip(QUANTILE_LEVELS, quantiles)}
        ),
        mean=float(values.mean()),
        count=int(values.size),
    )


def throughput_stats(runs: Iterable[float], backend: str = "scalar") -> ThroughputStats:
    values = np.asarray(list(runs), dtype=np.float64)
    if values.size == 0:
        return ThroughputStats(backend=backend)
    stddev = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return ThroughputStats(
        runs=[float(v) for v in values],
        mean=float(values.mean()),
        stddev=stddev,
        backend=backend,
    )


@dataclass
class LocalityTrial:
    """Outcome of one edit: how many chunks of the edited stream are new."""

    new_chunks: int
    total_chunks: int
    offset: int = 0  # insertion point in the original stream

    @property
    def changed_fraction(self) -> float:
        return self.new_chunks / self.total_chunks if self.total_chunks else 0.0


@dataclass
class LocalityResults:
    """
    Aggregates byte-shift trials of one algorithm.
    """

    algorithm: str
    trials: List[LocalityTrial] = field(default_factory=list)

    def share_within(self, max_new_chunks: int) -> float:
        """Share of trials whose edit produced at most ``max_new_chunks`` new chunks."""
        if not self.trials:
            return 0.0
        hits = sum(1 for t in self.trials if t.new_chunks <= max_new_chunks)
        return hits / len(self.trials)

    def to_dict(self) -> Dict[str, Any]:
        new_chunks = [t.new_chunks for t in self.trials]
        fractions = [t.changed_fraction for t in self.trials]
        return {
            "algorithm": self.algorithm,
            "trials": len(self.trials),
            "median_new_chunks": float(np.median(new_chunks)) if new_chunks else 0.0,
            "max_new_chunks": max(new_chunks, default=0),
            "mean_changed_fraction": round(float(np.mean(fractions)), 4) if fractions else 0.0,
        }

    def __str__(self) -> str:
        metrics = self.to_dict()
        return (
            f"Algorithm: {metrics['algorithm']}\n"
            f"Trials: {metrics['trials']}\n"
            f"Median new chunks: {metrics['median_new_chunks']}\n"
            f"Max new chunks: {metrics['max_new_chunks']}\n"
            f"Mean changed fraction: {metrics['mean_changed_fraction']}"
        )
