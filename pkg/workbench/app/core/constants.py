"""
Versioned calibration constants for every chunking algorithm.

Values are keyed by target average chunk size in bytes. Min/max chunk sizes
follow the half/double rule (1 KiB minimum at 4 KiB). Hash and extremum
parameters were derived from the closed-form expectation of each algorithm on
uniform random bytes under those limits; ``scripts/evaluation/calibrate_baselines.py``
re-measures them on seeded random data.
"""

import math
from typing import Dict, List, Tuple

CONSTANTS_VERSION = 1

KIB = 1024

CALIBRATED_TARGETS = (4 * KIB, 8 * KIB, 16 * KIB)

# SeqCDC: (seq_length, skip_trigger, skip_size)
SEQ_PARAMS: Dict[int, Tuple[int, int, int]] = {
    4 * KIB: (5, 55, 256),
    8 * KIB: (5, 50, 256),
    16 * KIB: (5, 50, 512),
}

# Rabin and Gear: number of hash bits matched for a candidate (Rabin: low bits
# all ones, Gear: top bits zero).
# Expected chunk = min + 2**bits, truncated at max.
HASH_MASK_BITS: Dict[int, int] = {
    4 * KIB: 12,
    8 * KIB: 12,
    16 * KIB: 13,
}

# FastCDC normalization level 2: strict mask = base + 2 bits before the
# target, relaxed mask = base - 2 bits after it.
FASTCDC_BASE_BITS: Dict[int, int] = {
    4 * KIB: 11,
    8 * KIB: 12,
    16 * KIB: 13,
}
FASTCDC_NORMALIZATION_LEVEL = 2

# AE: the extreme point settles on the first 0xFF byte (~256 bytes in), so
# the expected chunk is window + 256.
AE_WINDOW: Dict[int, int] = {
    4 * KIB: 3840,
    8 * KIB: 7936,
    16 * KIB: 16128,
}

# RAM: a window holding 0xFF never gets exceeded, so the window size sets the
# share of max-forced chunks.
RAM_WINDOW: Dict[int, int] = {
    4 * KIB: 138,
    8 * KIB: 101,
    16 * KIB: 102,
}

RABIN_WINDOW = 48
RABIN_MODULUS = (1 << 61) - 1
RABIN_BASE = 0x100000001B3

GEAR_SEED = 0x5EED0F6EA2
MASK64 = (1 << 64) - 1


def nearest_target(target_avg: int) -> int:
    """Calibrated target closest to ``target_avg`` on a log scale."""
    return min(
        CALIBRATED_TARGETS,
        key=lambda t: abs(math.log2(t) - math.log2(max(target_avg, 1))),
    )


def scaled_bits(table: Dict[int, int], target_avg: int) -> int:
    """Mask bits for an arbitrary target, shifted from the nearest calibrated one."""
    anchor = nearest_target(target_avg)
    shift = round(math.log2(max(target_avg, 1)) - math.log2(anchor))
    return max(1, table[anchor] + shift)


def scaled_window(table: Dict[int, int], target_avg: int, proportional: bool) -> int:
    anchor = nearest_target(target_avg)
    if not proportional:
        return table[anchor]
    return max(1, round(table[anchor] * target_avg / anchor))


def _splitmix64(seed: int) -> List[int]:
    state = seed & MASK64
    values = []
    for _ in range(256):
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        values.append(z ^ (z >> 31))
    return values


GEAR_TABLE: Tuple[int, ...] = tuple(_splitmix64(GEAR_SEED))
