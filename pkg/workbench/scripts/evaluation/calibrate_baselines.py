import sys
from pathlib import Path

# Add the workbench directory to sys.path
script_dir = Path(__file__).parent
workbench_dir = script_dir.parent.parent
project_root = workbench_dir.parent
sys.path.insert(0, str(project_root))
sys.path.insert(0, str(workbench_dir))

import os

os.environ["ENV_FILE"] = str(workbench_dir / ".env")

import argparse
import logging

import numpy as np
import pandas as pd

from app.core import constants
from app.models import Algorithm, BoundaryKind, make_config
from app.services.chunker import chunk_lengths, chunk_stream, seq_index_chunk
from app.services.corpus import random_bytes

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

CALIBRATION_SEED = 0xCA11B8


def calibrate(data: bytes, algorithm: Algorithm, target_avg: int) -> dict:
    cfg = make_config(algorithm, target_avg=target_avg)
    if algorithm == Algorithm.SEQ:
        events = seq_index_chunk(data, cfg)
    else:
        events = chunk_stream(data, cfg)
    lengths = np.asarray(chunk_lengths(events)[:-1])
    forced = sum(1 for e in events if e.kind == BoundaryKind.MAX_FORCED)
    row = {
        "algorithm": algorithm.value,
        "target_avg": target_avg,
        "chunks": int(lengths.size),
        "mean": float(lengths.mean()),
        "p50": float(np.median(lengths)),
        "iqr": float(np.subtract(*np.percentile(lengths, [75, 25]))),
        "max_forced_share": forced / len(events),
        "relative_error": float(lengths.mean()) / target_avg - 1.0,
    }
    row.update({f"param_{k}": v for k, v in cfg.params_dict().items() if k != "target_avg"})
    return row


def run_calibration(size: int, out: Path):
    try:
        logger.info(f"Generating {size} bytes of calibration data (seed {CALIBRATION_SEED:#x})...")
        data = random_bytes(CALIBRATION_SEED, size)

        rows = []
        for target_avg in constants.CALIBRATED_TARGETS:
            for algorithm in Algorithm:
                if algorithm == Algorithm.FIXED:
                    continue
                row = calibrate(data, algorithm, target_avg)
                logger.info(
                    f"{row['algorithm']:>8} @ {target_avg:>5}: mean {row['mean']:8.0f} "
                    f"({row['relative_error']:+.1%}), max-forced {row['max_forced_share']:.1%}"
                )
                rows.append(row)

        frame = pd.DataFrame(rows)
        out.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out, index=False)
        logger.info(f"Calibration table written to {out} (constants version {constants.CONSTANTS_VERSION})")

    except Exception as e:
        logger.error(f"Error during calibration: {str(e)}")
        import traceback

        logger.error("Full traceback:")
        logger.error(traceback.format_exc())
        raise


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Re-measure baseline constants on random data")
    parser.add_argument("--size", type=int, default=8 * 1024 * 1024)
    parser.add_argument("--out", type=Path, default=workbench_dir / "reports" / "calibration.csv")
    args = parser.parse_args()
    try:
        run_calibration(args.size, args.out)
    except Exception as e:
        logger.error(f"Script failed: {str(e)}")
        sys.exit(1)
