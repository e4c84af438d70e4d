from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Dict, Any, Optional, Sequence, Tuple, Union
import logging

import pandas as pd

from app import __version__
from app.core.config import settings
from app.core.exceptions import CDCException, CorpusError
from app.models import Algorithm, FileFailure, RunReport, SeqParams, make_config
from app.services.corpus import MANIFEST_NAME, load_manifest
from app.services.dedup import corpus_files, dedup_run
from app.services.microbench import host_description, microbench_bitops
from app.services.throughput import measure_throughput
from app.services.tuner import seq_params_for

logger = logging.getLogger(__name__)

RESULTS_CSV = "results.csv"
HOST_BITOPS_SAMPLES = 2_000
HOST_BITOPS_REPEAT = 3


@dataclass
class ExperimentCell:
    """One (algorithm, target size) point of the experiment grid."""

    algorithm: Algorithm
    target_avg: int
    seq: Optional[SeqParams] = None  # None: the published table row

    @property
    def label(self) -> str:
        return f"{self.algorithm.value}_{self.target_avg}"


@dataclass
class ExperimentResults:
    """
    Reports of every cell that ran, plus the cells that failed.
    """

    reports: List[RunReport] = field(default_factory=list)
    failures: List[FileFailure] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        """One flat row per report: params, dedup totals and throughput."""
        rows = []
        for report in self.reports:
            row: Dict[str, Any] = {
                "corpus": report.corpus,
                "algorithm": report.algorithm,
                "backend": report.backend,
            }
            row.update({f"param_{k}": v for k, v in report.params.items()})
            row.update(
                {
                    "total_bytes": report.total_bytes,
                    "chunk_count": report.chunk_count,
                    "unique_chunks": report.unique_chunks,
                    "unique_bytes": report.unique_bytes,
                    "space_savings": report.space_savings,
                    "mean_chunk": report.mean_chunk,
                    "metadata_bytes": report.metadata_bytes,
                    "throughput_gbps": report.throughput.mean,
                    "throughput_stddev": report.throughput.stddev,
                    "failed_files": len(report.errors),
                }
            )
            if report.quantiles is not None:
                row.update(report.quantiles.model_dump())
            rows.append(row)
        for failure in self.failures:
            rows.append({"algorithm": failure.path, "error": failure.error})
        return pd.DataFrame(rows)


def corpus_label(corpus: Union[str, Path]) -> str:
    """Manifest corpus id when the corpus has one, else the directory name."""
    path = Path(corpus)
    if path.is_dir() and (path / MANIFEST_NAME).exists():
        try:
            return load_manifest(path).corpus_id
        except CDCException:
            pass
    return path.name


def load_corpus_bytes(corpus: Union[str, Path]) -> bytes:
    """All corpus files concatenated, for throughput runs."""
    try:
        return b"".join(p.read_bytes() for p in corpus_files(corpus))
    except OSError as e:
        raise CorpusError(f"Cannot read corpus {corpus}: {e}") from e


def run_cell(
    corpus: Union[str, Path],
    cell: ExperimentCell,
    runs: int,
    backend: str,
    host: Dict[str, Any],
) -> RunReport:
    """dedup_run plus measure_throughput for one cell."""
    cfg = make_config(cell.algorithm, target_avg=cell.target_avg, seq=cell.seq)
    dedup = dedup_run(corpus, cfg, backend=backend, workers=1)
    data = load_corpus_bytes(corpus)
    throughput = measure_throughput(data, cfg, runs=runs, backend=backend) if data else None

    params = cfg.params_dict()
    if cell.algorithm == Algorithm.SEQ:
        params["param_source"] = "published" if cell.seq is None else "tuned"
    report = RunReport(
        corpus=corpus_label(corpus),
        algorithm=cell.algorithm.value,
        params=params,
        total_bytes=dedup.total_bytes,
        chunk_count=dedup.chunk_count,
        unique_chunks=dedup.unique_chunks,
        unique_bytes=dedup.unique_bytes,
        space_savings=dedup.space_savings,
        mean_chunk=dedup.mean_chunk,
        histogram=dedup.histogram.buckets,
        quantiles=dedup.histogram.quantiles,
        metadata_bytes=dedup.metadata_bytes,
        backend=dedup.backend,
        host=host,
        version=__version__,
        errors=dedup.errors,
    )
    if throughput is not None:
        report.throughput = throughput
    return report


def _run_cell_safe(args: Tuple) -> Tuple[Optional[RunReport], Optional[str]]:
    corpus, cell, runs, backend, host = args
    try:
        return run_cell(corpus, cell, runs, backend, host), None
    except (OSError, CDCException) as e:
        return None, f"{type(e).__name__}: {e}"


class ExperimentRunner:
    """
    Runs the full (algorithm x target size) grid over one corpus.
    Cells are independent; reports are assembled and written single-threaded.
    """

    def __init__(
        self,
        runs: Optional[int] = None,
        backend: Optional[str] = None,
        workers: Optional[int] = None,
        host: Optional[Dict[str, Any]] = None,
        seq_param_source: Optional[str] = None,
    ):
        self.runs = runs or settings.throughput_runs
        self.backend = backend or settings.default_backend
        self.workers = workers or settings.experiment_workers
        self.seq_param_source = seq_param_source or settings.seq_param_source
        if host is None:
            host = host_description(
                microbench_bitops(samples=HOST_BITOPS_SAMPLES, repeat=HOST_BITOPS_REPEAT)
            )
        self.host = host

    def run(
        self,
        corpus: Union[str, Path],
        algorithms: Sequence[Union[str, Algorithm]],
        sizes: Sequence[int],
        out_dir: Optional[Union[str, Path]] = None,
    ) -> ExperimentResults:
        cells = [
            ExperimentCell(Algorithm(algorithm), int(size))
            for algorithm in algorithms
            for size in sizes
        ]
        # tuned parameters are searched here once, not in every worker
        for cell in cells:
            if cell.algorithm == Algorithm.SEQ:
                cell.seq = seq_params_for(cell.target_avg, source=self.seq_param_source)
        logger.info(f"Running {len(cells)} cells over {corpus} with {self.workers} workers")
        jobs = [(corpus, cell, self.runs, self.backend, self.host) for cell in cells]

        if self.workers > 1 and len(cells) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                outcomes = list(pool.map(_run_cell_safe, jobs))
        else:
            outcomes = [_run_cell_safe(job) for job in jobs]

        results = ExperimentResults()
        for cell, (report, error) in zip(cells, outcomes):
            if error is not None:
                logger.error(f"Cell {cell.label} failed: {error}")
                results.failures.append(FileFailure(path=cell.label, error=error))
                continue
            results.reports.append(report)
            logger.info(
                f"Cell {cell.label}: savings {report.space_savings:.4f}, "
                f"{report.throughput.mean:.4f} GB/s"
            )

        if out_dir is not None:
            self.write(results, out_dir)
        return results

    def write(self, results: ExperimentResults, out_dir: Union[str, Path]) -> Path:
        """One JSON report per cell plus the combined CSV."""
        out_dir = Path(out_dir)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            for report in results.reports:
                name = f"{report.algorithm}_{report.params['target_avg']}.json"
                (out_dir / name).write_text(report.to_json())
            csv_path = out_dir / RESULTS_CSV
            results.to_frame().to_csv(csv_path, index=False)
        except OSError as e:
            raise CorpusError(f"Cannot write reports to {out_dir}: {e}") from e
        logger.info(f"Wrote {len(results.reports)} reports and {csv_path}")
        return csv_path


def run_experiment(
    corpus: Union[str, Path],
    algorithms: Sequence[Union[str, Algorithm]],
    sizes: Sequence[int],
    runs: Optional[int] = None,
    backend: Optional[str] = None,
    out_dir: Optional[Union[str, Path]] = None,
    seq_param_source: Optional[str] = None,
) -> ExperimentResults:
    runner = ExperimentRunner(runs=runs, backend=backend, seq_param_source=seq_param_source)
    return runner.run(corpus, algorithms, sizes, out_dir)
