"""
Command-line workbench.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O (corpus, index,
report files), 3 invariant violation found by a self-check.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __version__
from .core import constants
from .core.config import VALID_BACKENDS, VALID_SEQ_PARAM_SOURCES, settings, setup_logging
from .core.exceptions import (
    BitOpsError,
    CDCException,
    ConfigurationError,
    InvariantViolation,
    TunerError,
)
from .evaluation.byte_shift import run_byte_shift
from .evaluation.metrics import build_histogram
from .evaluation.runner import ExperimentRunner
from .models import Algorithm, SeqMode, make_config
from .services.chunker import (
    ChunkerFactory,
    audit_events,
    chunk_lengths,
    chunk_records,
    seq_reference,
)
from .services.corpus import gen_corpus, load_manifest
from .services.dedup import dedup_run
from .services.fingerprint import FingerprintIndex
from .services.microbench import microbench_bitops
from .services.tuner import tune, tuned_params

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INVARIANT = 3

MODES = {"inc": SeqMode.INCREASING, "dec": SeqMode.DECREASING}


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _trigger(value: str) -> Optional[int]:
    if value.lower() in ("none", "off", "inf"):
        return None
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'none', got {value!r}")


def _int_list(value: str) -> List[int]:
    try:
        return [int(v) for v in value.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")


def _algo_list(value: str) -> List[Algorithm]:
    try:
        return [Algorithm(v.strip().lower()) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown algorithm in {value!r}; choose from {[a.value for a in Algorithm]}"
        )


def _add_chunker_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--algo", default=Algorithm.SEQ.value, choices=[a.value for a in Algorithm]
    )
    parser.add_argument("--avg", type=int, default=8192, help="Target average chunk size")
    parser.add_argument("--min", type=int, dest="min_size", help="Minimum chunk size")
    parser.add_argument("--max", type=int, dest="max_size", help="Maximum chunk size")
    parser.add_argument("--mode", choices=sorted(MODES), help="SeqCDC run direction")
    parser.add_argument("--seq-length", type=int, help="SeqCDC sequence length")
    parser.add_argument(
        "--skip-trigger", type=_trigger, default=argparse.SUPPRESS,
        help="Opposing pairs per skip, or 'none'",
    )
    parser.add_argument("--skip-size", type=int, help="Bytes skipped per trigger")
    parser.add_argument("--mask-bits", type=int, help="Rabin/Gear mask bits")
    parser.add_argument("--window", type=int, help="Rabin/AE/RAM window size")
    parser.add_argument(
        "--backend", choices=VALID_BACKENDS, default=None,
        help=f"SeqCDC backend (default: {settings.default_backend})",
    )
    _add_seq_source_option(parser)


def _add_seq_source_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--seq-params", choices=VALID_SEQ_PARAM_SOURCES, default=None,
        help=f"SeqCDC defaults: published table or tuner-chosen "
        f"(default: {settings.seq_param_source})",
    )


def config_from_args(args: argparse.Namespace):
    """ChunkerConfig from the shared chunker options."""
    algorithm = Algorithm(args.algo)
    kwargs: Dict[str, Any] = {"target_avg": args.avg}
    if args.min_size is not None:
        kwargs["min_size"] = args.min_size
    if args.max_size is not None:
        kwargs["max_size"] = args.max_size

    if algorithm == Algorithm.SEQ:
        mode = MODES[args.mode or "inc"]
        source = getattr(args, "seq_params", None) or settings.seq_param_source
        if source == "tuned":
            tuned = tuned_params(args.avg, mode)
            seq_length, trigger, skip_size = (
                tuned.seq_length, tuned.skip_trigger, tuned.skip_size
            )
        else:
            seq_length, trigger, skip_size = constants.SEQ_PARAMS[
                constants.nearest_target(args.avg)
            ]
        kwargs["seq"] = {
            "mode": mode,
            "seq_length": args.seq_length if args.seq_length is not None else seq_length,
            "skip_trigger": getattr(args, "skip_trigger", trigger),
            "skip_size": args.skip_size if args.skip_size is not None else skip_size,
        }
    elif algorithm in (Algorithm.RABIN, Algorithm.GEAR) and (
        args.mask_bits is not None or args.window is not None
    ):
        hashing: Dict[str, Any] = {
            "mask_bits": args.mask_bits
            if args.mask_bits is not None
            else constants.scaled_bits(constants.HASH_MASK_BITS, args.avg)
        }
        if args.window is not None:
            hashing["window_size"] = args.window
        kwargs["hashing"] = hashing
    elif algorithm in (Algorithm.AE, Algorithm.RAM) and args.window is not None:
        kwargs["extremum"] = {"window_size": args.window}
    return make_config(algorithm, **kwargs)


def _print_json(payload: Any) -> None:
    print(json.dumps(payload, indent=2, default=str))


def _read_input(path: str) -> bytes:
    return Path(path).read_bytes()


def cmd_chunk(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    data = _read_input(args.path)
    if not data:
        raise ConfigurationError(f"{args.path} is empty")
    chunker = ChunkerFactory.get_chunker(cfg, args.backend or settings.default_backend)
    events = chunker.chunk(data)

    if args.verify:
        audit_events(data, events, cfg)
        if cfg.algorithm == Algorithm.SEQ:
            expected = seq_reference(data, cfg)
            if expected != events:
                first = next(
                    (i for i, (a, b) in enumerate(zip(events, expected)) if a != b),
                    min(len(events), len(expected)),
                )
                raise InvariantViolation(
                    f"Backend {chunker.backend} disagrees with the reference scanner "
                    f"at boundary {first}"
                )
        logger.info(f"Verified {len(events)} boundaries")

    if args.list:
        for record, event in zip(chunk_records(data, events), events):
            print(f"{record.offset}\t{record.length}\t{event.kind.value}\t{record.fingerprint.hex()}")
        return EXIT_OK

    lengths = chunk_lengths(events)
    histogram = build_histogram(lengths, lower=1, upper=cfg.max_size)
    kinds: Dict[str, int] = {}
    for event in events:
        kinds[event.kind.value] = kinds.get(event.kind.value, 0) + 1
    _print_json(
        {
            "path": args.path,
            "algorithm": cfg.algorithm.value,
            "params": cfg.params_dict(),
            "backend": chunker.backend,
            "total_bytes": len(data),
            "chunk_count": len(events),
            "mean_chunk": histogram.mean,
            "quantiles": histogram.quantiles.model_dump() if histogram.quantiles else None,
            "boundary_kinds": kinds,
            "verified": bool(args.verify),
        }
    )
    return EXIT_OK


def cmd_dedup(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    index = None
    if args.index and Path(args.index).exists():
        index = FingerprintIndex.load(args.index)
    index = index or FingerprintIndex()
    report = dedup_run(args.corpus, cfg, backend=args.backend, index=index, workers=args.workers)
    if args.index:
        index.save(args.index)
    text = report.model_dump_json(indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    runner = ExperimentRunner(
        runs=args.runs,
        backend=args.backend,
        workers=args.workers,
        seq_param_source=args.seq_params,
    )
    bitops = runner.host.get("bitops_ns_per_op", {})
    print("  ".join(f"{name}: {ns:.1f} ns/op" for name, ns in bitops.items()))
    results = runner.run(args.corpus, args.algos, args.sizes, out_dir=args.out)
    print(results.to_frame().to_string(index=False))
    return EXIT_OK


def cmd_gen_corpus(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    out_dir = args.out or Path(settings.corpus_dir) / manifest.corpus_id
    result = gen_corpus(manifest, out_dir)
    _print_json({"corpus": result.corpus_id, "out": str(out_dir), "paths": result.paths})
    return EXIT_OK


def cmd_tune(args: argparse.Namespace) -> int:
    result = tune(args.target, MODES[args.mode], sample_size=args.sample_size, seed=args.seed)
    text = result.model_dump_json(indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return EXIT_OK


def cmd_microbench(args: argparse.Namespace) -> int:
    timings = microbench_bitops(samples=args.samples, repeat=args.repeat)
    print(f"{'primitive':<20} {'ns/op':>10} {'Mops/s':>10} {'correct':>8}")
    for t in timings:
        print(f"{t.primitive:<20} {t.ns_per_op:>10.1f} {t.mops:>10.2f} {str(t.correct):>8}")
    if not all(t.correct for t in timings):
        raise InvariantViolation("A bit helper disagreed with its bit-walk oracle")
    return EXIT_OK


def cmd_shift(args: argparse.Namespace) -> int:
    results = run_byte_shift(
        args.algos,
        target_avg=args.avg,
        trials=args.trials,
        data_size=args.size,
        insert_length=args.insert_length,
        seed=args.seed,
        seq_param_source=args.seq_params,
    )
    _print_json({name: outcome.to_dict() for name, outcome in results.items()})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = WorkbenchArgumentParser(
        prog="workbench", description="Content-defined chunking workbench"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Override CDC_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chunk", help="Chunk one file and summarize the boundaries")
    _add_chunker_options(p)
    p.add_argument("--verify", action="store_true", help="Audit boundaries (exit 3 on failure)")
    p.add_argument("--list", action="store_true", help="Print one line per chunk")
    p.add_argument("path")
    p.set_defaults(handler=cmd_chunk)

    p = sub.add_parser("dedup", help="Deduplicate a corpus and print a DedupReport")
    _add_chunker_options(p)
    p.add_argument("--index", help="Fingerprint index file to load and update")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", help="Also write the report to this file")
    p.add_argument("corpus")
    p.set_defaults(handler=cmd_dedup)

    p = sub.add_parser("bench", help="Run the algorithm x size experiment grid")
    p.add_argument("--algos", type=_algo_list, default=[Algorithm.FIXED, Algorithm.SEQ])
    p.add_argument("--sizes", type=_int_list, default=list(constants.CALIBRATED_TARGETS))
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--backend", choices=VALID_BACKENDS, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None, help="Report directory (default: CDC_OUTPUT_DIR)")
    _add_seq_source_option(p)
    p.add_argument("corpus")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("gen-corpus", help="Generate a corpus from a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_gen_corpus)

    p = sub.add_parser("tune", help="Search SeqCDC parameters for a target size")
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--mode", choices=sorted(MODES), default="inc")
    p.add_argument("--sample-size", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_tune)

    p = sub.add_parser("microbench", help="Time the bit-manipulation helpers")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--repeat", type=int, default=5)
    p.set_defaults(handler=cmd_microbench)

    p = sub.add_parser("shift", help="Byte-shift locality experiment")
    p.add_argument("--algos", type=_algo_list, default=[Algorithm.FIXED, Algorithm.SEQ])
    p.add_argument("--avg", type=int, default=8192)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--size", type=int, default=8 * 1024 * 1024)
    p.add_argument("--insert-length", type=int, default=64)
    p.add_argument("--seed", type=int, default=0x5817F7)
    _add_seq_source_option(p)
    p.set_defaults(handler=cmd_shift)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and args.out is None:
        args.out = settings.output_dir

    try:
        if args.log_level:
            setup_logging(args.log_level)
        return args.handler(args)
    except InvariantViolation as e:
        logger.error(f"Self-check failed: {e}")
        return EXIT_INVARIANT
    except (ConfigurationError, BitOpsError, TunerError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except (CDCException, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
