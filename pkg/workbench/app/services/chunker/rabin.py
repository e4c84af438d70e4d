"""
Rabin chunking: a polynomial rolling fingerprint over a sliding window.

The fingerprint of window b[0..w-1] is sum(b[k] * BASE**(w-1-k)) mod a
Mersenne prime. A position is a candidate when the low ``mask_bits`` bits of
the fingerprint are all ones; all-zero content fingerprints to 0 and never
qualifies, so it falls back to MaxForced cuts.
"""

import logging
from typing import Iterator, List

from .base import BaseChunker, Buffer
from .limits import enforce_limits
from ...core import constants
from ...models import BoundaryEvent, ChunkerConfig

logger = logging.getLogger(__name__)


class RabinHash:
    """Rolling Rabin-Karp fingerprint with O(1) slide."""

    def __init__(
        self,
        window_size: int = constants.RABIN_WINDOW,
        base: int = constants.RABIN_BASE,
        modulus: int = constants.RABIN_MODULUS,
    ):
        self.window_size = window_size
        self.base = base % modulus
        self.modulus = modulus
        # weight of the byte leaving the window
        self.out_weight = pow(self.base, window_size - 1, modulus)

    def compute(self, window: bytes) -> int:
        """Full recompute over one window (Horner's rule)."""
        h = 0
        for b in window:
            h = (h * self.base + b) % self.modulus
        return h

    def roll(self, h: int, outgoing: int, incoming: int) -> int:
        """Fingerprint after dropping ``outgoing`` and appending ``incoming``."""
        h = (h - outgoing * self.out_weight) % self.modulus
        return (h * self.base + incoming) % self.modulus


def rabin_candidates(data: Buffer, window_size: int, mask_bits: int) -> Iterator[int]:
    """Ascending candidate boundaries (one past the window's last byte)."""
    raw = bytes(data)
    if len(raw) < window_size:
        return
    hasher = RabinHash(window_size)
    mask = (1 << mask_bits) - 1
    h = hasher.compute(raw[:window_size])
    if h & mask == mask:
        yield window_size
    for i in range(window_size, len(raw)):
        h = hasher.roll(h, raw[i - window_size], raw[i])
        if h & mask == mask:
            yield i + 1


def rabin_chunk(data: Buffer, cfg: ChunkerConfig) -> List[BoundaryEvent]:
    params = cfg.hashing
    candidates = rabin_candidates(data, params.window_size, params.mask_bits)
    return enforce_limits(candidates, cfg.min_size, cfg.max_size, len(data))


class RabinChunker(BaseChunker):
    def chunk(self, data: Buffer) -> List[BoundaryEvent]:
        return rabin_chunk(data, self.cfg)
