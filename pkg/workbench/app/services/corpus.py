"""
Synthetic corpus generation.

Version 0 is seeded random bytes; every later version applies the manifest's
mutation spec to the previous one. All randomness comes from a Philox
counter-based generator read through ``random_raw``, so a manifest reproduces
byte-identical files on any host and numpy version.
"""

import json
import logging
import math
from pathlib import Path
from typing import List, Union

import numpy as np

from ..core.exceptions import CorpusError
from ..models import CorpusManifest, MutationOp, MutationSpec

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
_TWO_53 = float(1 << 53)


class CorpusRng:
    """Portable random stream: bytes, bounded integers and geometric lengths."""

    def __init__(self, seed: int):
        self.seed = seed
        self._bitgen = np.random.Philox(key=seed)

    def words(self, count: int) -> np.ndarray:
        return self._bitgen.random_raw(count).astype("<u8")

    def bytes(self, size: int) -> bytes:
        if size <= 0:
            return b""
        return self.words((size + 7) // 8).tobytes()[:size]

    def integer(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound <= 0:
            raise CorpusError(f"Integer bound must be positive, got {bound}")
        return int(self.words(1)[0]) % bound

    def uniform(self) -> float:
        """Uniform float in (0, 1]."""
        return ((int(self.words(1)[0]) >> 11) + 1) / _TWO_53

    def geometric(self, mean: float) -> int:
        """Length >= 1 from a geometric distribution with the given mean."""
        if mean <= 1.0:
            return 1
        p = 1.0 / mean
        return 1 + int(math.floor(math.log(self.uniform()) / math.log1p(-p)))


def random_bytes(seed: int, size: int) -> bytes:
    return CorpusRng(seed).bytes(size)


def apply_mutation(data: bytearray, spec: MutationSpec, rng: CorpusRng) -> None:
    """Apply ``spec.count`` edits of one kind in place."""
    for _ in range(spec.count):
        length = rng.geometric(spec.mean_length)
        if spec.op == MutationOp.INSERT:
            offset = rng.integer(len(data) + 1)
            data[offset:offset] = rng.bytes(length)
            continue
        if not data:
            continue
        length = min(length, len(data))
        offset = rng.integer(len(data) - length + 1)
        if spec.op == MutationOp.DELETE:
            del data[offset : offset + length]
        else:
            data[offset : offset + length] = rng.bytes(length)


def version_name(version: int) -> str:
    return f"version_{version:03d}.bin"


def gen_corpus(manifest: CorpusManifest, out_dir: Union[str, Path]) -> CorpusManifest:
    """
    Write every version of the chain plus ``manifest.json`` into ``out_dir``.

    Returns:
        The manifest with ``paths`` filled in (relative to out_dir)

    Raises:
        CorpusError: If writing fails; files written so far are removed
    """
    out_dir = Path(out_dir)
    rng = CorpusRng(manifest.seed)
    written: List[Path] = []
    paths: List[str] = []
    logger.info(
        f"Generating {manifest.versions} versions of {manifest.base_size} bytes "
        f"(seed {manifest.seed:#x}) into {out_dir}"
    )
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        data = bytearray(rng.bytes(manifest.base_size))
        for version in range(manifest.versions):
            if version:
                for spec in manifest.mutation_spec:
                    apply_mutation(data, spec, rng)
            path = out_dir / version_name(version)
            written.append(path)
            path.write_bytes(bytes(data))
            paths.append(path.name)
            logger.debug(f"Wrote {path} ({len(data)} bytes)")

        result = manifest.model_copy(update={"paths": paths})
        manifest_path = out_dir / MANIFEST_NAME
        written.append(manifest_path)
        manifest_path.write_text(result.model_dump_json(indent=2))
    except OSError as e:
        for path in written:
            path.unlink(missing_ok=True)
        logger.error(f"Corpus generation failed, removed partial output: {e}")
        raise CorpusError(f"Failed to write corpus to {out_dir}: {e}") from e

    logger.info(f"Corpus {result.corpus_id} written")
    return result


def load_manifest(path: Union[str, Path]) -> CorpusManifest:
    """
    Read a manifest file (or the manifest of a corpus directory).

    Raises:
        CorpusError: If the file is missing or not a valid manifest
    """
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    try:
        return CorpusManifest.model_validate(json.loads(path.read_text()))
    except OSError as e:
        raise CorpusError(f"Cannot read manifest {path}: {e}") from e
    except ValueError as e:
        raise CorpusError(f"Invalid manifest {path}: {e}") from e
