"""
Host lane-width detection for the accelerated SeqCDC scanner.

Detection reads numpy's CPU feature table once per process.
"""

from dataclasses import dataclass
from functools import lru_cache
import importlib
import logging
from typing import Dict, Optional, Tuple

from ...core.config import VALID_BACKENDS
from ...core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

SUPPORTED_WIDTHS = (64, 32, 16)

_WIDTH_FEATURES = {
    64: ("AVX512BW", "AVX512_SKX"),
    32: ("AVX2",),
    16: ("SSE2", "ASIMD", "NEON", "VSX", "VX"),
}


def cpu_features() -> Dict[str, bool]:
    """numpy's runtime CPU feature table (empty if unavailable)."""
    for module_name in ("numpy._core._multiarray_umath", "numpy.core._multiarray_umath"):
        try:
            module = importlib.import_module(module_name)
        except ImportError:
            continue
        features = getattr(module, "__cpu_features__", None)
        if features:
            return dict(features)
    return {}


@lru_cache(maxsize=1)
def host_lane_widths() -> Tuple[int, ...]:
    """Lane widths in bytes the host supports, widest first."""
    features = cpu_features()
    widths = tuple(
        width
        for width in SUPPORTED_WIDTHS
        if any(features.get(name) for name in _WIDTH_FEATURES[width])
    )
    logger.info(f"Detected lane widths: {list(widths) or 'none (scalar only)'}")
    return widths


@dataclass(frozen=True)
class BackendChoice:
    requested: str
    width: Optional[int]
    fell_back: bool = False

    @property
    def name(self) -> str:
        return "scalar" if self.width is None else f"w{self.width}"


def resolve_backend(requested: str) -> BackendChoice:
    """
    Map a requested backend to what the host can run.

    An unsupported width falls back to the widest supported one, then to scalar.

    Raises:
        ConfigurationError: If the backend name is unknown
    """
    requested = (requested or "auto").lower()
    if requested not in VALID_BACKENDS:
        raise ConfigurationError(
            f"Unknown backend '{requested}'. Must be one of {VALID_BACKENDS}"
        )
    if requested == "scalar":
        return BackendChoice(requested, None)

    widths = host_lane_widths()
    if requested == "auto":
        return BackendChoice(requested, widths[0] if widths else None, not widths)

    wanted = int(requested[1:])
    if wanted in widths:
        return BackendChoice(requested, wanted)

    fallback = widths[0] if widths else None
    logger.warning(
        f"Lane width {wanted} unsupported on this host, using "
        f"{'w' + str(fallback) if fallback else 'scalar'}"
    )
    return BackendChoice(requested, fallback, True)
