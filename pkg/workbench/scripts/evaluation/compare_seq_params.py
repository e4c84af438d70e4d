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

import pandas as pd

from app.core import constants
from app.models import SeqMode, make_config
from app.services.chunker import simulate_chunk_lengths
from app.services.corpus import random_bytes
from app.services.tuner import tune

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

HELD_OUT_SEED = 0x4E1D0
HELD_OUT_BYTES = 16 * 1024 * 1024


def compare(target_avg: int, held_out: bytes) -> dict:
    """Published table row against the tuner's pick, both replayed on held-out data."""
    result = tune(target_avg, SeqMode.INCREASING)
    limits = make_config("seq", target_avg=target_avg)
    published = result.reference
    chosen = result.chosen
    replay = simulate_chunk_lengths(held_out, chosen, limits.min_size, limits.max_size)
    published_replay = simulate_chunk_lengths(
        held_out, published.params, limits.min_size, limits.max_size
    )
    return {
        "target_avg": target_avg,
        "published": f"{published.params.seq_length}/{published.params.skip_trigger}/"
        f"{published.params.skip_size}",
        "published_mean": round(published.simulated_mean),
        "published_held_out_mean": round(float(published_replay.mean())),
        "tuned": f"{chosen.seq_length}/{chosen.skip_trigger}/{chosen.skip_size}",
        "tuned_mean": round(result.candidates[0].simulated_mean),
        "tuned_held_out_mean": round(float(replay.mean())),
        "tuned_held_out_error": float(replay.mean()) / target_avg - 1.0,
    }


def run_comparison(out: Path):
    try:
        logger.info("Comparing published SeqCDC parameters with tuner picks...")
        held_out = random_bytes(HELD_OUT_SEED, HELD_OUT_BYTES)
        rows = []
        for target_avg in constants.CALIBRATED_TARGETS:
            row = compare(target_avg, held_out)
            logger.info(
                f"{target_avg:>5}: published {row['published']} -> {row['published_mean']} B, "
                f"tuned {row['tuned']} -> {row['tuned_held_out_mean']} B held out "
                f"({row['tuned_held_out_error']:+.1%})"
            )
            rows.append(row)

        out.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(rows).to_csv(out, index=False)
        logger.info(f"Comparison written to {out}")

    except Exception as e:
        logger.error(f"Error during comparison: {str(e)}")
        import traceback

        logger.error("Full traceback:")
        logger.error(traceback.format_exc())
        raise


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Published vs tuned SeqCDC parameters")
    parser.add_argument("--out", type=Path, default=workbench_dir / "reports" / "seq_params.csv")
    args = parser.parse_args()
    try:
        run_comparison(args.out)
    except Exception as e:
        logger.error(f"Script failed: {str(e)}")
        sys.exit(1)
