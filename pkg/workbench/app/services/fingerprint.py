"""
Chunk fingerprints and the in-memory fingerprint index.

The index persists as a flat file: magic ``SQFP``, a version byte, a
little-endian uint64 count, then the sorted raw 32-byte digests.
"""

import hashlib
import logging
import os
import struct
from pathlib import Path
from typing import Iterable, Set, Tuple, Union

from ..core.exceptions import FingerprintIndexError

logger = logging.getLogger(__name__)

DIGEST_SIZE = 32
INDEX_MAGIC = b"SQFP"
INDEX_VERSION = 1
_HEADER = struct.Struct("<4sBQ")


def fingerprint(chunk) -> bytes:
    """SHA-256 digest of one chunk."""
    return hashlib.sha256(chunk).digest()


class FingerprintIndex:
    """
    Set of chunk digests plus the counters of everything inserted into it.

    Digests loaded from disk are known but not counted; counters only reflect
    inserts made through this instance.
    """

    def __init__(self, digests: Iterable[bytes] = ()):
        self.digests: Set[bytes] = set(digests)
        self.total_chunks = 0
        self.unique_chunks = 0
        self.total_bytes = 0
        self.unique_bytes = 0

    def __len__(self) -> int:
        return len(self.digests)

    def __contains__(self, digest: bytes) -> bool:
        return digest in self.digests

    def insert(self, digest: bytes, length: int) -> bool:
        """Record one chunk; True if its fingerprint was not seen before."""
        if len(digest) != DIGEST_SIZE:
            raise FingerprintIndexError(
                f"Digest must be {DIGEST_SIZE} bytes, got {len(digest)}"
            )
        self.total_chunks += 1
        self.total_bytes += length
        if digest in self.digests:
            return False
        self.digests.add(digest)
        self.unique_chunks += 1
        self.unique_bytes += length
        return True

    def merge(self, chunks: Iterable[Tuple[bytes, int]]) -> None:
        for digest, length in chunks:
            self.insert(digest, length)

    def save(self, path: Union[str, Path]) -> Path:
        """
        Write the digests atomically (temp file, then rename).

        Raises:
            FingerprintIndexError: If the file cannot be written
        """
        path = Path(path)
        tmp_path = path.with_name(path.name + ".tmp")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(tmp_path, "wb") as fd:
                fd.write(_HEADER.pack(INDEX_MAGIC, INDEX_VERSION, len(self.digests)))
                for digest in sorted(self.digests):
                    fd.write(digest)
                fd.flush()
                os.fsync(fd.fileno())
            os.replace(tmp_path, path)
        except OSError as e:
            tmp_path.unlink(missing_ok=True)
            raise FingerprintIndexError(f"Failed to save index to {path}: {e}") from e
        logger.info(f"Saved {len(self.digests)} fingerprints to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FingerprintIndex":
        """
        Read an index written by ``save``.

        Raises:
            FingerprintIndexError: On I/O failure, bad magic/version or truncation
        """
        path = Path(path)
        try:
            raw = path.read_bytes()
        except OSError as e:
            raise FingerprintIndexError(f"Failed to read index {path}: {e}") from e

        if len(raw) < _HEADER.size:
            raise FingerprintIndexError(f"Index {path} is truncated")
        magic, version, count = _HEADER.unpack_from(raw)
        if magic != INDEX_MAGIC:
            raise FingerprintIndexError(f"{path} is not a fingerprint index")
        if version != INDEX_VERSION:
            raise FingerprintIndexError(f"Unsupported index version {version}")
        body = raw[_HEADER.size :]
        if len(body) != count * DIGEST_SIZE:
            raise FingerprintIndexError(
                f"Index {path} declares {count} digests but holds {len(body)} bytes"
            )

        index = cls(body[i : i + DIGEST_SIZE] for i in range(0, len(body), DIGEST_SIZE))
        logger.info(f"Loaded {len(index)} fingerprints from {path}")
        return index
