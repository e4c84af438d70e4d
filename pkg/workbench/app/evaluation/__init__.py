from .metrics import (
    LocalityResults,
    LocalityTrial,
    build_histogram,
    space_savings,
    throughput_stats,
)

__all__ = [
    "LocalityResults",
    "LocalityTrial",
    "build_histogram",
    "space_savings",
    "throughput_stats",
]
