from typing import Dict, List, Optional, Sequence, Union
import logging

from app.core.exceptions import ConfigurationError
from app.evaluation.metrics import LocalityResults, LocalityTrial
from app.models import Algorithm, ChunkerConfig, make_config
from app.services.chunker import chunk_records, chunk_stream, seq_index_chunk
from app.services.corpus import CorpusRng
from app.services.tuner import seq_params_for

logger = logging.getLogger(__name__)


def _fingerprints(data: bytes, cfg: ChunkerConfig) -> List[bytes]:
    # the indexed simulator is boundary-identical to the scalar scanner and much faster
    if cfg.algorithm == Algorithm.SEQ:
        events = seq_index_chunk(data, cfg)
    else:
        events = chunk_stream(data, cfg)
    return [record.fingerprint for record in chunk_records(data, events)]


def insertion_trial(
    original: bytes, known: set, cfg: ChunkerConfig, offset: int, inserted: bytes
) -> LocalityTrial:
    """Chunk the edited stream and count chunks absent from the original."""
    edited = original[:offset] + inserted + original[offset:]
    edited_fps = _fingerprints(edited, cfg)
    new_chunks = sum(1 for fp in edited_fps if fp not in known)
    return LocalityTrial(new_chunks=new_chunks, total_chunks=len(edited_fps), offset=offset)


def run_byte_shift(
    algorithms: Sequence[Union[str, Algorithm]],
    target_avg: int = 8192,
    trials: int = 100,
    data_size: int = 8 * 1024 * 1024,
    insert_length: int = 64,
    seed: int = 0x5817F7,
    configs: Optional[Dict[Algorithm, ChunkerConfig]] = None,
    seq_param_source: Optional[str] = None,
) -> Dict[str, LocalityResults]:
    """
    Byte-shift locality: one random insertion per trial into a random buffer.

    Every algorithm sees the same buffer, offsets and inserted bytes, and the
    edits are drawn in order, so a run with fewer trials replays a prefix of a
    longer run with the same seed and size.
    """
    if trials < 1 or data_size < 1 or insert_length < 1:
        raise ConfigurationError("trials, data_size and insert_length must be positive")

    rng = CorpusRng(seed)
    original = rng.bytes(data_size)
    edits = [(rng.integer(data_size + 1), rng.bytes(insert_length)) for _ in range(trials)]

    results: Dict[str, LocalityResults] = {}
    for algorithm in algorithms:
        algorithm = Algorithm(algorithm)
        cfg = (configs or {}).get(algorithm)
        if cfg is None:
            seq = None
            if algorithm == Algorithm.SEQ:
                seq = seq_params_for(target_avg, source=seq_param_source)
            cfg = make_config(algorithm, target_avg=target_avg, seq=seq)
        known = set(_fingerprints(original, cfg))
        outcome = LocalityResults(algorithm=algorithm.value)
        for offset, inserted in edits:
            outcome.trials.append(insertion_trial(original, known, cfg, offset, inserted))
        results[algorithm.value] = outcome
        logger.info(f"Byte-shift results:\n{outcome}")
    return results
