"""
Bit-manipulation helpers used by the lane-parallel scanner.

Masks are arbitrary-width non-negative Python ints; bit 0 is lane 0.
"""

from typing import Optional

from ...core.exceptions import BitOpsError


def popcount(mask: int) -> int:
    """Number of set bits."""
    return mask.bit_count()


def first_set_bit(mask: int) -> Optional[int]:
    """Index of the lowest set bit, or None for an empty mask."""
    if mask == 0:
        return None
    return (mask & -mask).bit_length() - 1


def select_kth_set_bit(mask: int, k: int) -> int:
    """
    Index of the k-th lowest set bit (1-based rank).

    Raises:
        BitOpsError: If k < 1 or the mask has fewer than k set bits
    """
    if mask < 0:
        raise BitOpsError(f"Mask must be non-negative, got {mask}")
    if k < 1 or mask.bit_count() < k:
        raise BitOpsError(
            f"Rank {k} out of range for a mask with {mask.bit_count()} set bits"
        )
    # Drop the k-1 lowest set bits, then take the lowest remaining one
    for _ in range(k - 1):
        mask &= mask - 1
    return (mask & -mask).bit_length() - 1


def low_bits(count: int) -> int:
    """Mask with the ``count`` lowest bits set (0 for count <= 0)."""
    if count <= 0:
        return 0
    return (1 << count) - 1
