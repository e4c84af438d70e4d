"""
Min/max boundary enforcement shared by the candidate-based chunkers, plus the
self-check audits run over any boundary list.
"""

import logging
from typing import Iterable, List

from ...core.exceptions import InvariantViolation
from ...models import Algorithm, BoundaryEvent, BoundaryKind, ChunkerConfig, SeqMode

logger = logging.getLogger(__name__)


def enforce_limits(
    candidates: Iterable[int], min_size: int, max_size: int, length: int
) -> List[BoundaryEvent]:
    """
    Clamp a raw ascending candidate stream to [min_size, max_size] chunks.

    Candidates closer than min_size to the previous boundary are dropped;
    MaxForced boundaries are inserted wherever a gap would exceed max_size.
    The stream always ends with a boundary at ``length``.
    """
    events: List[BoundaryEvent] = []
    last = 0
    for candidate in candidates:
        if candidate >= length:
            break
        while candidate - last > max_size:
            last += max_size
            events.append(BoundaryEvent(BoundaryKind.MAX_FORCED, last))
        if candidate - last < min_size:
            continue
        events.append(BoundaryEvent(BoundaryKind.SEQUENCE, candidate))
        last = candidate

    while length - last > max_size:
        last += max_size
        events.append(BoundaryEvent(BoundaryKind.MAX_FORCED, last))
    if last < length:
        events.append(BoundaryEvent(BoundaryKind.END_OF_STREAM, length))
    return events


def chunk_lengths(events: List[BoundaryEvent]) -> List[int]:
    lengths = []
    previous = 0
    for event in events:
        lengths.append(event.position - previous)
        previous = event.position
    return lengths


def is_monotone_run(window: bytes, mode: SeqMode) -> bool:
    """True when every adjacent pair is strictly ordered in the mode's direction."""
    if mode == SeqMode.INCREASING:
        return all(a < b for a, b in zip(window, window[1:]))
    return all(a > b for a, b in zip(window, window[1:]))


def audit_events(data, events: List[BoundaryEvent], cfg: ChunkerConfig) -> None:
    """
    Check partition, bounds and (for SeqCDC) boundary witnesses.

    Raises:
        InvariantViolation: On the first broken invariant
    """
    length = len(data)
    if not events:
        if length:
            raise InvariantViolation("No boundaries for a non-empty stream")
        return
    if events[-1].position != length:
        raise InvariantViolation(
            f"Boundaries end at {events[-1].position}, stream length is {length}"
        )

    previous = 0
    for index, event in enumerate(events):
        size = event.position - previous
        if size <= 0:
            raise InvariantViolation(
                f"Boundary {index} at {event.position} does not advance past {previous}"
            )
        if size > cfg.max_size:
            raise InvariantViolation(
                f"Chunk {index} is {size} bytes, above max_size {cfg.max_size}"
            )
        is_final = index == len(events) - 1
        if not is_final and size < cfg.min_size:
            raise InvariantViolation(
                f"Chunk {index} is {size} bytes, below min_size {cfg.min_size}"
            )
        if cfg.algorithm == Algorithm.SEQ and event.kind == BoundaryKind.SEQUENCE:
            seq_length = cfg.seq.seq_length
            window = bytes(data[event.position - seq_length : event.position])
            if not is_monotone_run(window, cfg.seq.mode):
                raise InvariantViolation(
                    f"Sequence boundary at {event.position} has no monotone witness"
                )
        previous = event.position

    logger.debug(f"Audit passed for {len(events)} boundaries over {length} bytes")
