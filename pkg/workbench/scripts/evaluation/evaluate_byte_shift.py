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
import json
import logging

from app.evaluation.byte_shift import run_byte_shift
from app.models import Algorithm

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# 100 single 64-byte insertions into an 8 MiB random file
TRIALS = 100
DATA_SIZE = 8 * 1024 * 1024
SEQ_NEW_CHUNK_LIMIT = 8

# thresholds derived from the recorded published-parameter run (docs/parameters.md)
SEQ_MEDIAN_NEW_CHUNKS = 16
SEQ_MAX_CHANGED_FRACTION = 0.10
FIXED_MIN_CHANGED_FRACTION = 0.50


def check_thresholds(results) -> list:
    """Names of the derived locality thresholds the run missed."""
    seq = results["seq"]
    missed = []
    if seq.to_dict()["median_new_chunks"] > SEQ_MEDIAN_NEW_CHUNKS:
        missed.append(f"Seq median new chunks above {SEQ_MEDIAN_NEW_CHUNKS}")
    if max(t.changed_fraction for t in seq.trials) > SEQ_MAX_CHANGED_FRACTION:
        missed.append(f"a Seq trial changed more than {SEQ_MAX_CHANGED_FRACTION:.0%} of chunks")
    if results["fixed"].to_dict()["mean_changed_fraction"] < FIXED_MIN_CHANGED_FRACTION:
        missed.append(f"fixed-size changed less than {FIXED_MIN_CHANGED_FRACTION:.0%} of chunks")
    return missed


def run_evaluation(seq_param_source=None):
    try:
        logger.info("Starting byte-shift evaluation...")
        results = run_byte_shift(
            [Algorithm.FIXED, Algorithm.SEQ, Algorithm.FASTCDC],
            target_avg=8192,
            trials=TRIALS,
            data_size=DATA_SIZE,
            seq_param_source=seq_param_source,
        )

        logger.info("\nByte-shift Results:")
        logger.info("-" * 50)
        for outcome in results.values():
            logger.info(f"\n{outcome}")

        seq_share = results["seq"].share_within(SEQ_NEW_CHUNK_LIMIT)
        fixed_fraction = results["fixed"].to_dict()["mean_changed_fraction"]
        logger.info(
            f"Seq trials with <= {SEQ_NEW_CHUNK_LIMIT} new chunks: {seq_share:.0%}; "
            f"fixed-size mean changed fraction: {fixed_fraction:.0%}"
        )

        out = workbench_dir / "reports" / "byte_shift.json"
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(
            json.dumps({name: o.to_dict() for name, o in results.items()}, indent=2)
        )
        logger.info(f"Results written to {out}")

        missed = check_thresholds(results)
        for reason in missed:
            logger.warning(f"Locality threshold missed: {reason}")
        return not missed

    except Exception as e:
        logger.error(f"Error during evaluation process: {str(e)}")
        import traceback

        logger.error("Full traceback:")
        logger.error(traceback.format_exc())
        raise


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Byte-shift locality evaluation")
    parser.add_argument("--seq-params", choices=["published", "tuned"], default=None)
    args = parser.parse_args()
    try:
        if not run_evaluation(args.seq_params):
            sys.exit(1)
    except Exception as e:
        logger.error(f"Script failed: {str(e)}")
        sys.exit(1)
