import time

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from app.core.exceptions import ConfigurationError
from app.models import (
    Algorithm,
    BoundaryEvent,
    BoundaryKind,
    SeqMode,
    SeqParams,
    make_config,
)
from app.services.chunker import (
    ReferenceSeqScanner,
    SeqIndex,
    audit_events,
    chunk_lengths,
    chunk_stream,
    seq_chunk,
    seq_find_boundary,
    seq_index_chunk,
    seq_reference,
    simulate_chunk_lengths,
)
from app.services.corpus import random_bytes

DESCENDING = bytes(range(255, -1, -1))


def seq_config(min_size, max_size, mode=SeqMode.INCREASING, seq_length=3, skip_trigger=None, skip_size=0):
    return make_config(
        Algorithm.SEQ,
        target_avg=min_size,
        min_size=min_size,
        max_size=max_size,
        seq=SeqParams(
            mode=mode, seq_length=seq_length, skip_trigger=skip_trigger, skip_size=skip_size
        ),
    )


@st.composite
def seq_cases(draw):
    seq_length = draw(st.integers(3, 7))
    min_size = draw(st.integers(seq_length, 96))
    max_size = draw(st.integers(min_size, 320))
    cfg = seq_config(
        min_size,
        max_size,
        mode=draw(st.sampled_from(list(SeqMode))),
        seq_length=seq_length,
        skip_trigger=draw(st.one_of(st.none(), st.integers(1, 12))),
        skip_size=draw(st.integers(0, 48)),
    )
    # a small alphabet gives equal pairs and long runs as well as opposing pairs
    alphabet = draw(st.sampled_from([4, 16, 256]))
    data = bytes(draw(st.lists(st.integers(0, alphabet - 1), min_size=1, max_size=2048)))
    return data, cfg


def test_boundary_after_first_qualifying_run():
    params = SeqParams(seq_length=3, skip_trigger=None, skip_size=0)
    event = seq_find_boundary(bytes([9, 5, 1, 2, 3, 8, 0]), 0, params, 3, 8)
    assert event == BoundaryEvent(BoundaryKind.SEQUENCE, 5)


def test_skip_lands_past_triggering_pair():
    params = SeqParams(seq_length=5, skip_trigger=2, skip_size=4)
    scanner = ReferenceSeqScanner(DESCENDING * 4, params, min_size=5, max_size=64)
    event = scanner.find_boundary(0)
    # second decreasing pair is (1, 2); the cursor lands 4 bytes past byte 2
    assert scanner.skips[0] == (2, 6)
    assert event == BoundaryEvent(BoundaryKind.MAX_FORCED, 64)


def test_decreasing_data_forces_max_size():
    cfg = make_config(Algorithm.SEQ, target_avg=8192)
    data = (DESCENDING * 65)[: cfg.max_size + 1]
    events = chunk_stream(data, cfg)
    assert events == [
        BoundaryEvent(BoundaryKind.MAX_FORCED, cfg.max_size),
        BoundaryEvent(BoundaryKind.END_OF_STREAM, cfg.max_size + 1),
    ]


def test_decreasing_mode_finds_descending_run():
    cfg = seq_config(3, 8, mode=SeqMode.DECREASING)
    events = seq_chunk(bytes([1, 5, 9, 8, 7, 1, 4]), cfg)
    assert events[0] == BoundaryEvent(BoundaryKind.SEQUENCE, 5)


def test_table_params_on_random_data(random_data):
    cfg = make_config(Algorithm.SEQ, target_avg=8192)
    events = seq_chunk(random_data, cfg)
    lengths = chunk_lengths(events)
    assert all(4096 <= n <= 16384 for n in lengths[:-1])
    assert 4096 <= sum(lengths[:-1]) / len(lengths[:-1]) <= 16384
    audit_events(random_data, events, cfg)


def test_reference_matches_optimized_on_random_data(random_data):
    cfg = make_config(Algorithm.SEQ, target_avg=4096)
    assert seq_reference(random_data, cfg) == seq_chunk(random_data, cfg)


def test_trailing_short_region_is_one_final_chunk(random_data):
    cfg = make_config(Algorithm.SEQ, target_avg=4096)
    events = seq_reference(random_data, cfg)
    cut = events[0].position + 10
    tail = seq_reference(random_data[:cut], cfg)
    assert tail == [events[0], BoundaryEvent(BoundaryKind.END_OF_STREAM, cut)]


def test_concatenated_copy_repeats_pattern(random_data):
    cfg = make_config(Algorithm.SEQ, target_avg=4096)
    events = seq_chunk(random_data, cfg)
    last_sequence = max(e.position for e in events if e.kind == BoundaryKind.SEQUENCE)
    half = random_data[:last_sequence]
    first = seq_chunk(half, cfg)
    doubled = seq_chunk(half + half, cfg)
    assert doubled[: len(first)] == first
    shifted = [BoundaryEvent(e.kind, e.position + len(half)) for e in first]
    assert doubled[len(first) :] == shifted


def test_insert_keeps_earlier_boundaries(random_data):
    cfg = make_config(Algorithm.SEQ, target_avg=8192)
    p = len(random_data) // 2
    edited = random_data[:p] + b"\x00" + random_data[p:]
    before = seq_chunk(random_data, cfg)
    after = seq_chunk(edited, cfg)
    unaffected = [e for e in before if e.position <= p]
    # the chunk containing p starts at the last boundary at or before p
    assert after[: len(unaffected)] == unaffected


def test_mode_symmetry(small_random_data):
    inc = make_config(Algorithm.SEQ, target_avg=4096, seq={"mode": "increasing"})
    dec = make_config(Algorithm.SEQ, target_avg=4096, seq={"mode": "decreasing"})
    complement = bytes(255 - b for b in small_random_data)
    assert seq_chunk(small_random_data, dec) == seq_chunk(complement, inc)


def test_index_matches_reference(random_data):
    cfg = make_config(Algorithm.SEQ, target_avg=8192)
    assert seq_index_chunk(random_data, cfg) == seq_reference(random_data, cfg)


def test_index_rejects_other_seq_length(small_random_data):
    index = SeqIndex(small_random_data, SeqParams(seq_length=5))
    with pytest.raises(ConfigurationError):
        index.find_boundary(0, 4096, 8192, SeqParams(seq_length=4))


def test_index_lookup_cost_does_not_grow_with_stream():
    data = random_bytes(0x1D5, 8 * 1024 * 1024)
    index = SeqIndex(data, SeqParams(seq_length=5))
    assert index.opposing_positions.dtype == np.int64

    started = time.perf_counter()
    for cursor in range(0, len(data) - 4096, 4096):
        index._trigger_pair(cursor, 50)
    elapsed = time.perf_counter() - started
    # 2047 lookups; a per-call copy of the 4M-entry array takes seconds
    assert elapsed < 1.0


def test_simulated_lengths_skip_final_chunk(random_data):
    cfg = make_config(Algorithm.SEQ, target_avg=8192)
    events = seq_index_chunk(random_data, cfg)
    lengths = simulate_chunk_lengths(random_data, cfg.seq, cfg.min_size, cfg.max_size)
    if events[-1].kind == BoundaryKind.END_OF_STREAM:
        assert list(lengths) == chunk_lengths(events)[:-1]
    else:
        assert list(lengths) == chunk_lengths(events)


def test_seq_length_larger_than_min_size_rejected():
    with pytest.raises(ConfigurationError):
        seq_config(4, 64, seq_length=5)


def test_empty_stream_rejected():
    with pytest.raises(ConfigurationError):
        chunk_stream(b"", make_config(Algorithm.SEQ))


@given(seq_cases())
@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_optimized_scanner_matches_reference(case):
    data, cfg = case
    expected = seq_reference(data, cfg)
    assert seq_chunk(data, cfg) == expected
    assert seq_index_chunk(data, cfg) == expected


@given(seq_cases())
@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_boundaries_carry_witness_and_bounds(case):
    data, cfg = case
    audit_events(data, seq_chunk(data, cfg), cfg)
