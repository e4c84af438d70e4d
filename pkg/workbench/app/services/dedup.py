"""
Deduplication runs: chunk every file of a corpus, fingerprint the chunks and
aggregate savings and chunk-size statistics.
"""

from concurrent.futures import ProcessPoolExecutor
import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .chunker import ChunkerFactory, chunk_records
from .corpus import MANIFEST_NAME
from .fingerprint import DIGEST_SIZE, FingerprintIndex
from ..core.config import settings
from ..core.exceptions import CDCException, CorpusError
from ..evaluation.metrics import build_histogram, space_savings
from ..models import ChunkerConfig, DedupReport, FileFailure

logger = logging.getLogger(__name__)

# per chunk reference: digest plus a little-endian uint64 length
CHUNK_REFERENCE_BYTES = DIGEST_SIZE + 8

Corpus = Union[str, Path, Sequence[Union[str, Path]]]
FileChunks = List[Tuple[bytes, int]]


def corpus_files(corpus: Corpus) -> List[Path]:
    """
    Files of a corpus in sorted path order.

    A directory holding ``manifest.json`` contributes the manifest's paths;
    any other directory contributes every regular file below it.

    Raises:
        CorpusError: If the corpus does not exist or the manifest is unreadable
    """
    if isinstance(corpus, (str, Path)):
        root = Path(corpus)
        if root.is_file():
            return [root]
        if not root.is_dir():
            raise CorpusError(f"Corpus not found: {root}")
        manifest_path = root / MANIFEST_NAME
        if manifest_path.exists():
            try:
                paths = json.loads(manifest_path.read_text())["paths"]
            except (OSError, ValueError, KeyError) as e:
                raise CorpusError(f"Unreadable manifest {manifest_path}: {e}") from e
            return sorted(root / p for p in paths)
        return sorted(
            p for p in root.rglob("*") if p.is_file() and p.name != MANIFEST_NAME
        )
    return sorted(Path(p) for p in corpus)


def chunk_file(path: Path, cfg: ChunkerConfig, backend: Optional[str]) -> FileChunks:
    """(digest, length) of every chunk of one file, in stream order."""
    data = Path(path).read_bytes()
    if not data:
        return []
    chunker = ChunkerFactory.get_chunker(cfg, backend)
    return [(r.fingerprint, r.length) for r in chunk_records(data, chunker.chunk(data))]


def _chunk_file_safe(path: Path, cfg: ChunkerConfig, backend: Optional[str]):
    try:
        return chunk_file(path, cfg, backend), None
    except (OSError, CDCException) as e:
        return None, f"{type(e).__name__}: {e}"


def dedup_run(
    corpus: Corpus,
    cfg: ChunkerConfig,
    backend: Optional[str] = None,
    index: Optional[FingerprintIndex] = None,
    workers: Optional[int] = None,
) -> DedupReport:
    """
    Chunk, fingerprint and index a whole corpus.

    Args:
        corpus: Directory, single file or list of files
        cfg: Chunker configuration
        backend: SeqCDC backend (settings.default_backend when None)
        index: Existing index to accumulate into; a fresh one when None
        workers: Chunking processes (settings.dedup_workers when None)

    Returns:
        DedupReport; unreadable files are listed in ``errors`` and skipped
    """
    backend = backend or settings.default_backend
    workers = workers or settings.dedup_workers
    index = index if index is not None else FingerprintIndex()
    files = corpus_files(corpus)
    backend_used = ChunkerFactory.get_chunker(cfg, backend).backend
    logger.info(
        f"Dedup run over {len(files)} files with {cfg.algorithm.value} "
        f"(target {cfg.target_avg}, backend {backend_used}, workers {workers})"
    )

    chunks_before = index.total_chunks
    bytes_before = index.total_bytes
    unique_chunks_before = index.unique_chunks
    unique_bytes_before = index.unique_bytes

    if workers > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    _chunk_file_safe, files, [cfg] * len(files), [backend] * len(files)
                )
            )
    else:
        results = [_chunk_file_safe(path, cfg, backend) for path in files]

    # single writer: partial results are merged in sorted file order
    lengths: List[int] = []
    errors: List[FileFailure] = []
    file_count = 0
    for path, (file_chunks, error) in zip(files, results):
        if error is not None:
            logger.error(f"Skipping {path}: {error}")
            errors.append(FileFailure(path=str(path), error=error))
            continue
        index.merge(file_chunks)
        lengths.extend(length for _, length in file_chunks)
        file_count += 1
        logger.debug(f"Indexed {len(file_chunks)} chunks from {path}")

    total_bytes = index.total_bytes - bytes_before
    unique_bytes = index.unique_bytes - unique_bytes_before
    chunk_count = index.total_chunks - chunks_before
    unique_chunks = index.unique_chunks - unique_chunks_before

    if total_bytes:
        savings = space_savings(total_bytes, unique_bytes)
    else:
        logger.warning("Dedup run saw no data; space savings reported as 0")
        savings = 0.0

    histogram = build_histogram(lengths, lower=1, upper=cfg.max_size)
    report = DedupReport(
        file_count=file_count,
        total_bytes=total_bytes,
        chunk_count=chunk_count,
        unique_chunks=unique_chunks,
        unique_bytes=unique_bytes,
        space_savings=savings,
        mean_chunk=total_bytes / chunk_count if chunk_count else 0.0,
        metadata_bytes=CHUNK_REFERENCE_BYTES * chunk_count + DIGEST_SIZE * unique_chunks,
        histogram=histogram,
        backend=backend_used,
        errors=errors,
    )
    logger.info(
        f"Dedup run done: {chunk_count} chunks, {unique_chunks} unique, "
        f"savings {savings:.4f}, {len(errors)} failed files"
    )
    return report
