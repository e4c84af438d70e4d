"""
Monte-Carlo search for SeqCDC parameters.

Mean chunk size on random data is non-increasing in skip_trigger (fewer skips,
fewer skipped bytes), so for every (seq_length, skip_size) pair the trigger is
bisected on a search segment. The closest points are then re-simulated on the
whole sample, which is what the chosen parameters are judged on.
"""

import logging
from functools import lru_cache
from typing import Dict, Iterator, List, Optional

import numpy as np

from .chunker import SeqIndex
from .corpus import CorpusRng
from ..core import constants
from ..core.config import settings
from ..core.exceptions import ConfigurationError, TunerError
from ..models import SeqMode, SeqParams, TunerCandidate, TunerResult, make_config

logger = logging.getLogger(__name__)

SEQ_LENGTHS = tuple(range(3, 8))
SKIP_SIZES = (0, 128, 256, 512)
TRIGGER_RANGE = (1, 1024)
FINALISTS = 5


def sample_segments(seed: int, sample_size: int, segment_bytes: int) -> Iterator[bytes]:
    """The random sample as consecutive independent segments."""
    rng = CorpusRng(seed)
    remaining = sample_size
    while remaining > 0:
        size = min(segment_bytes, remaining)
        yield rng.bytes(size)
        remaining -= size


def _candidate(params: SeqParams, lengths: np.ndarray, validated: bool) -> TunerCandidate:
    if lengths.size == 0:
        return TunerCandidate(
            params=params, simulated_mean=0.0, simulated_p50=0.0, chunk_count=0, validated=validated
        )
    return TunerCandidate(
        params=params,
        simulated_mean=float(lengths.mean()),
        simulated_p50=float(np.median(lengths)),
        chunk_count=int(lengths.size),
        validated=validated,
    )


class _SearchSample:
    """Lazily built indexes of the search segment, one per seq_length."""

    def __init__(self, data: bytes, mode: SeqMode, min_size: int, max_size: int):
        self.data = data
        self.mode = mode
        self.min_size = min_size
        self.max_size = max_size
        self._indexes: Dict[int, SeqIndex] = {}

    def evaluate(self, params: SeqParams) -> TunerCandidate:
        index = self._indexes.get(params.seq_length)
        if index is None:
            index = SeqIndex(self.data, params)
            self._indexes[params.seq_length] = index
        return _candidate(params, index.lengths(self.min_size, self.max_size, params), False)


def _bisect_trigger(
    sample: _SearchSample, mode: SeqMode, seq_length: int, skip_size: int, target_avg: int
) -> List[TunerCandidate]:
    points: Dict[int, TunerCandidate] = {}

    def mean_at(trigger: int) -> float:
        points[trigger] = sample.evaluate(
            SeqParams(mode=mode, seq_length=seq_length, skip_trigger=trigger, skip_size=skip_size)
        )
        return points[trigger].simulated_mean

    lo, hi = TRIGGER_RANGE
    # target outside [mean(hi), mean(lo)]: the nearest end is the best point
    if mean_at(hi) >= target_avg or mean_at(lo) <= target_avg:
        return list(points.values())
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mean_at(mid) > target_avg:
            lo = mid
        else:
            hi = mid
    return list(points.values())


def _validate(
    finalists: List[SeqParams],
    seed: int,
    sample_size: int,
    segment_bytes: int,
    min_size: int,
    max_size: int,
) -> List[TunerCandidate]:
    """Simulate every finalist on the whole sample, one segment at a time."""
    collected: List[List[np.ndarray]] = [[] for _ in finalists]
    by_length: Dict[int, List[int]] = {}
    for i, params in enumerate(finalists):
        by_length.setdefault(params.seq_length, []).append(i)

    for segment in sample_segments(seed, sample_size, segment_bytes):
        for members in by_length.values():
            index = SeqIndex(segment, finalists[members[0]])
            for i in members:
                collected[i].append(index.lengths(min_size, max_size, finalists[i]))
            del index

    return [
        _candidate(params, np.concatenate(parts) if parts else np.empty(0), True)
        for params, parts in zip(finalists, collected)
    ]


def tune(
    target_avg: int,
    mode: SeqMode = SeqMode.INCREASING,
    sample_size: Optional[int] = None,
    seed: Optional[int] = None,
) -> TunerResult:
    """
    Search SeqParams whose simulated mean chunk size is closest to target_avg.

    Args:
        target_avg: Target average chunk size; min/max follow the half/double rule
        mode: Direction of boundary runs
        sample_size: Bytes of seeded random data (at least settings.tuner_min_sample_bytes)
        seed: Sample seed (settings.tuner_seed when None)

    Returns:
        TunerResult; validated candidates come first, each group sorted by
        distance to the target

    Raises:
        ConfigurationError: If the sample is too small or the target invalid
        TunerError: If no candidate lands within settings.tuner_error_tolerance
    """
    sample_size = sample_size or settings.tuner_min_sample_bytes
    if sample_size < settings.tuner_min_sample_bytes:
        raise ConfigurationError(
            f"Tuner sample must be at least {settings.tuner_min_sample_bytes} bytes, "
            f"got {sample_size}"
        )
    seed = settings.tuner_seed if seed is None else seed
    segment_bytes = settings.tuner_segment_bytes
    limits = make_config("seq", target_avg=target_avg)
    min_size, max_size = limits.min_size, limits.max_size
    logger.info(
        f"Tuning SeqCDC for {target_avg} bytes ({mode.value}, min {min_size}, "
        f"max {max_size}) on {sample_size} bytes, seed {seed:#x}"
    )

    search_data = next(sample_segments(seed, sample_size, segment_bytes))
    sample = _SearchSample(search_data, mode, min_size, max_size)
    explored: List[TunerCandidate] = []
    for seq_length in SEQ_LENGTHS:
        for skip_size in SKIP_SIZES:
            if skip_size == 0:
                # a zero-byte skip lands on the next pair: same as never skipping
                explored.append(
                    sample.evaluate(
                        SeqParams(mode=mode, seq_length=seq_length, skip_trigger=None, skip_size=0)
                    )
                )
                continue
            explored.extend(_bisect_trigger(sample, mode, seq_length, skip_size, target_avg))
        logger.debug(f"seq_length {seq_length}: {len(explored)} points explored")

    explored.sort(key=lambda c: c.error(target_avg))
    finalists = [c.params for c in explored[:FINALISTS]]

    reference_params = None
    if target_avg in constants.SEQ_PARAMS:
        seq_length, trigger, skip_size = constants.SEQ_PARAMS[target_avg]
        reference_params = SeqParams(
            mode=mode, seq_length=seq_length, skip_trigger=trigger, skip_size=skip_size
        )

    to_validate = finalists + ([reference_params] if reference_params else [])
    validated = _validate(to_validate, seed, sample_size, segment_bytes, min_size, max_size)
    reference = validated[-1] if reference_params else None
    finalist_results = sorted(validated[: len(finalists)], key=lambda c: c.error(target_avg))

    if reference is not None:
        logger.info(
            f"Default parameters {reference_params.seq_length}/"
            f"{reference_params.skip_trigger}/{reference_params.skip_size} simulate to "
            f"{reference.simulated_mean:.0f} bytes (target {target_avg})"
        )

    best = finalist_results[0]
    if best.error(target_avg) > settings.tuner_error_tolerance * target_avg:
        nearest = ", ".join(
            f"{c.params.seq_length}/{c.params.skip_trigger}/{c.params.skip_size} "
            f"-> {c.simulated_mean:.0f}"
            for c in finalist_results[:3]
        )
        raise TunerError(
            f"No parameters within {settings.tuner_error_tolerance:.0%} of "
            f"{target_avg} bytes; nearest: {nearest}"
        )
    if best.error(target_avg) > settings.tuner_tolerance * target_avg:
        logger.warning(
            f"Best candidate misses {target_avg} by more than "
            f"{settings.tuner_tolerance:.0%}: {best.simulated_mean:.0f} bytes"
        )

    logger.info(
        f"Chose seq_length={best.params.seq_length} skip_trigger={best.params.skip_trigger} "
        f"skip_size={best.params.skip_size}: mean {best.simulated_mean:.0f} bytes"
    )
    return TunerResult(
        target_avg=target_avg,
        sample_size=sample_size,
        candidates=finalist_results + explored[FINALISTS:],
        chosen=best.params,
        reference=reference,
    )


@lru_cache(maxsize=None)
def tuned_params(target_avg: int, mode: SeqMode = SeqMode.INCREASING) -> SeqParams:
    """Tuner-chosen parameters for target_avg, searched once per process."""
    return tune(target_avg, mode).chosen


def seq_params_for(
    target_avg: int,
    mode: SeqMode = SeqMode.INCREASING,
    source: Optional[str] = None,
) -> Optional[SeqParams]:
    """
    SeqParams an experiment should run with.

    Returns None for the published table, which ChunkerConfig fills in itself.
    """
    source = (source or settings.seq_param_source).lower()
    if source == "published":
        return None
    if source == "tuned":
        return tuned_params(target_avg, mode)
    raise ConfigurationError(f"Unknown SeqCDC parameter source: {source}")
