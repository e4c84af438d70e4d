import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from app.core.exceptions import ChunkingError, ConfigurationError
from app.models import Algorithm, BoundaryEvent, BoundaryKind, SeqMode, SeqParams, make_config
from app.services.chunker import (
    AcceleratedSeqChunker,
    ChunkerFactory,
    LaneWidth,
    accel_chunk,
    scan_block,
    seq_chunk,
    seq_reference,
)
from app.services.chunker import backend
from app.services.chunker.seqcdc import ScanState

WIDTHS = list(LaneWidth)


def small_config(min_size, max_size, seq_length=3, skip_trigger=None, skip_size=0, mode=SeqMode.INCREASING):
    return make_config(
        Algorithm.SEQ,
        target_avg=min_size,
        min_size=min_size,
        max_size=max_size,
        seq=SeqParams(mode=mode, seq_length=seq_length, skip_trigger=skip_trigger, skip_size=skip_size),
    )


def test_block_marks_run_start_lane():
    data = bytearray([0x20] * 66)
    data[61:64] = bytes([0x12, 0x13, 0x14])
    params = SeqParams(seq_length=3, skip_trigger=None, skip_size=0)
    result = scan_block(bytes(data), 0, params, ScanState(), LaneWidth.W64)
    assert result.boundary_bit == 61
    assert result.boundary_bit + params.seq_length == 64
    assert result.skip_bit is None


def test_block_of_equal_bytes():
    params = SeqParams(seq_length=5, skip_trigger=2, skip_size=8)
    result = scan_block(bytes([7] * 40), 0, params, ScanState(), LaneWidth.W32)
    assert result.boundary_bit is None
    assert result.opposing_mask == 0
    assert result.consumed == 32
    assert result.opposing_total_after == 0


def test_block_skip_preempts_later_run():
    # opposing pairs at lanes 0 and 1, qualifying run starting at lane 4
    data = bytes([9, 8, 7, 7, 1, 2, 3]) + bytes([3] * 20)
    params = SeqParams(seq_length=3, skip_trigger=2, skip_size=4)
    result = scan_block(data, 0, params, ScanState(), LaneWidth.W16)
    assert result.skip_bit == 1
    assert result.boundary_bit is None
    assert result.consumed == 2


def test_block_counts_carried_opposing_pairs():
    data = bytes([9, 8]) + bytes([8] * 20)
    params = SeqParams(seq_length=3, skip_trigger=3, skip_size=4)
    result = scan_block(data, 0, params, ScanState(opposing_count=2), LaneWidth.W16)
    assert result.skip_bit == 0


def test_block_past_data_end_rejected():
    params = SeqParams(seq_length=5)
    with pytest.raises(ChunkingError):
        scan_block(bytes(19), 0, params, ScanState(), LaneWidth.W16)


@pytest.mark.parametrize("width", WIDTHS)
def test_run_straddling_block_edge(width):
    data = bytearray([0x80] * 200)
    data[62:67] = bytes([10, 11, 12, 13, 14])
    cfg = small_config(5, 256, seq_length=5)
    events = accel_chunk(bytes(data), cfg, width)
    assert events[0] == BoundaryEvent(BoundaryKind.SEQUENCE, 67)
    assert events == seq_reference(bytes(data), cfg)


@pytest.mark.parametrize("width", WIDTHS)
def test_widths_match_reference_on_random_data(width, random_data):
    cfg = make_config(Algorithm.SEQ, target_avg=4096)
    assert accel_chunk(random_data, cfg, width) == seq_reference(random_data, cfg)


@pytest.mark.parametrize("width", WIDTHS)
def test_widths_match_with_frequent_skips(width, small_random_data):
    cfg = small_config(64, 1024, seq_length=5, skip_trigger=3, skip_size=5)
    assert accel_chunk(small_random_data, cfg, width) == seq_chunk(small_random_data, cfg)


def test_decreasing_mode_matches_scalar(small_random_data):
    cfg = make_config(Algorithm.SEQ, target_avg=4096, seq={"mode": "decreasing"})
    expected = seq_chunk(small_random_data, cfg)
    for width in WIDTHS:
        assert accel_chunk(small_random_data, cfg, width) == expected


@st.composite
def block_cases(draw):
    seq_length = draw(st.integers(3, 6))
    min_size = draw(st.integers(seq_length, 80))
    cfg = small_config(
        min_size,
        draw(st.integers(min_size, 400)),
        seq_length=seq_length,
        skip_trigger=draw(st.one_of(st.none(), st.integers(1, 10))),
        skip_size=draw(st.integers(0, 40)),
        mode=draw(st.sampled_from(list(SeqMode))),
    )
    alphabet = draw(st.sampled_from([3, 8, 256]))
    data = bytes(draw(st.lists(st.integers(0, alphabet - 1), min_size=1, max_size=1500)))
    return data, cfg


@given(block_cases(), st.sampled_from(WIDTHS))
@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_accelerated_matches_reference(case, width):
    data, cfg = case
    assert accel_chunk(data, cfg, width) == seq_reference(data, cfg)


def test_resolve_falls_back_to_widest_supported(monkeypatch):
    monkeypatch.setattr(backend, "host_lane_widths", lambda: (32, 16))
    choice = backend.resolve_backend("w64")
    assert choice.width == 32
    assert choice.fell_back
    assert choice.name == "w32"


def test_resolve_falls_back_to_scalar(monkeypatch):
    monkeypatch.setattr(backend, "host_lane_widths", lambda: ())
    choice = backend.resolve_backend("w16")
    assert choice.width is None
    assert choice.name == "scalar"
    assert backend.resolve_backend("auto").name == "scalar"


def test_resolve_rejects_unknown_backend():
    with pytest.raises(ConfigurationError):
        backend.resolve_backend("w128")


def test_factory_reports_backend_used(monkeypatch):
    monkeypatch.setattr(backend, "host_lane_widths", lambda: (16,))
    cfg = make_config(Algorithm.SEQ)
    chunker = ChunkerFactory.get_chunker(cfg, "auto")
    assert isinstance(chunker, AcceleratedSeqChunker)
    assert chunker.backend == "w16"
    assert ChunkerFactory.get_chunker(cfg, "scalar").backend == "scalar"
    # baselines have no lane-parallel backend
    assert ChunkerFactory.get_chunker(make_config(Algorithm.FIXED), "w64").backend == "scalar"


def test_host_widths_are_known_widths():
    assert set(backend.host_lane_widths()) <= {16, 32, 64}


def test_block_scan_same_for_bytes_and_lanes(small_random_data):
    params = make_config(Algorithm.SEQ, target_avg=4096).seq
    lanes = np.frombuffer(small_random_data, dtype=np.uint8)
    for pos in (0, 100, 1000):
        assert scan_block(lanes, pos, params, ScanState(), LaneWidth.W32) == scan_block(
            small_random_data, pos, params, ScanState(), LaneWidth.W32
        )
