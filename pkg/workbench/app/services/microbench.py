"""
Bit-manipulation microbenchmark.

Times the mask helpers the lane-parallel scanner relies on over randomized
64-bit masks, and checks each against a bit-walk oracle on the same masks.
"""

import logging
import platform
import timeit
from typing import Any, Dict, List, Optional

import numpy as np

from .chunker.backend import host_lane_widths
from .chunker.bitops import first_set_bit, popcount, select_kth_set_bit
from .corpus import CorpusRng
from ..models import BitOpTiming

logger = logging.getLogger(__name__)


def walk_popcount(mask: int) -> int:
    return sum(1 for bit in range(mask.bit_length()) if mask >> bit & 1)


def walk_first_set_bit(mask: int) -> Optional[int]:
    for bit in range(mask.bit_length()):
        if mask >> bit & 1:
            return bit
    return None


def walk_select(mask: int, k: int) -> int:
    seen = 0
    for bit in range(mask.bit_length()):
        if mask >> bit & 1:
            seen += 1
            if seen == k:
                return bit
    raise ValueError(f"mask {mask:#x} has fewer than {k} set bits")


def random_masks(count: int, seed: int = 0xB17) -> List[int]:
    """Non-zero random 64-bit masks."""
    words = CorpusRng(seed).words(count)
    return [int(w) or 1 for w in words]


def _ranks(masks: List[int]) -> List[int]:
    # a mid-range rank keeps select's loop length representative
    return [max(1, popcount(m) // 2) for m in masks]


def microbench_bitops(
    samples: int = 10_000, repeat: int = 5, seed: int = 0xB17
) -> List[BitOpTiming]:
    """
    ns/op for first_set_bit, select_kth_set_bit and popcount.

    Each primitive's best-of-``repeat`` time over ``samples`` calls is reported.
    """
    masks = random_masks(samples, seed)
    ranks = _ranks(masks)

    primitives = {
        "first_set_bit": (
            lambda: [first_set_bit(m) for m in masks],
            first_set_bit(0) is None
            and all(first_set_bit(m) == walk_first_set_bit(m) for m in masks),
        ),
        "select_kth_set_bit": (
            lambda: [select_kth_set_bit(m, k) for m, k in zip(masks, ranks)],
            all(select_kth_set_bit(m, k) == walk_select(m, k) for m, k in zip(masks, ranks)),
        ),
        "popcount": (
            lambda: [popcount(m) for m in masks],
            popcount(0) == 0 and all(popcount(m) == walk_popcount(m) for m in masks),
        ),
    }

    timings = []
    for name, (run, correct) in primitives.items():
        best = min(timeit.repeat(run, number=1, repeat=repeat))
        ns_per_op = best * 1e9 / samples
        timings.append(
            BitOpTiming(
                primitive=name,
                ns_per_op=ns_per_op,
                mops=1e3 / ns_per_op if ns_per_op else 0.0,
                correct=bool(correct),
            )
        )
        logger.info(f"{name}: {ns_per_op:.1f} ns/op (correct={correct})")
    return timings


def host_description(bitops: Optional[List[BitOpTiming]] = None) -> Dict[str, Any]:
    """Host facts recorded in every run report."""
    host: Dict[str, Any] = {
        "machine": platform.machine(),
        "system": platform.system(),
        "processor": platform.processor(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "lane_widths": list(host_lane_widths()),
    }
    if bitops:
        host["bitops_ns_per_op"] = {t.primitive: round(t.ns_per_op, 2) for t in bitops}
    return host
