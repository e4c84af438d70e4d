import logging
import time
from typing import Optional

from .chunker import Buffer, ChunkerFactory
from ..core.config import settings
from ..core.exceptions import ConfigurationError
from ..evaluation.metrics import throughput_stats
from ..models import ChunkerConfig, ThroughputStats

logger = logging.getLogger(__name__)


def measure_throughput(
    data: Buffer,
    cfg: ChunkerConfig,
    runs: Optional[int] = None,
    backend: Optional[str] = None,
) -> ThroughputStats:
    """
    Chunking throughput in GB/s over an in-memory buffer.

    One warm-up pass is discarded; each timed run covers boundary production
    only (no reading, no fingerprinting).
    """
    runs = runs or settings.throughput_runs
    if runs < 1:
        raise ConfigurationError(f"runs must be >= 1, got {runs}")
    if len(data) == 0:
        raise ConfigurationError("Cannot measure throughput on an empty buffer")

    chunker = ChunkerFactory.get_chunker(cfg, backend or settings.default_backend)
    chunker.chunk(data)

    gigabytes = len(data) / 1e9
    rates = []
    for run in range(runs):
        started = time.perf_counter()
        chunker.chunk(data)
        elapsed = time.perf_counter() - started
        rates.append(gigabytes / max(elapsed, 1e-9))
        logger.debug(f"Run {run + 1}/{runs}: {rates[-1]:.4f} GB/s")

    stats = throughput_stats(rates, backend=chunker.backend)
    logger.info(
        f"{cfg.algorithm.value} @ {cfg.target_avg}: {stats.mean:.4f} GB/s "
        f"(stddev {stats.relative_stddev:.1%}, backend {stats.backend})"
    )
    return stats
