import numpy as np
import pytest

from app.models import Algorithm, BoundaryKind, make_config
from app.services.chunker import (
    RabinHash,
    audit_events,
    chunk_lengths,
    chunk_stream,
    fixed_chunk,
)
from app.services.chunker.gear import gear_candidates
from app.services.corpus import random_bytes

ALL_ALGORITHMS = list(Algorithm)


def iqr(lengths):
    q25, q75 = np.percentile(lengths, [25, 75])
    return q75 - q25


def mean_without_final(events):
    lengths = chunk_lengths(events)[:-1]
    return sum(lengths) / len(lengths)


@pytest.fixture(scope="module")
def megabyte():
    return random_bytes(0xFA57, 1024 * 1024)


def test_fixed_ten_megabytes():
    events = fixed_chunk(bytes(10 * 1024 * 1024), make_config(Algorithm.FIXED, target_avg=8192))
    assert len(events) == 1280
    assert all(n == 8192 for n in chunk_lengths(events))


def test_fixed_exact_multiple():
    events = fixed_chunk(bytes(3 * 8192), make_config(Algorithm.FIXED, target_avg=8192))
    assert [e.position for e in events] == [8192, 16384, 24576]


def test_fixed_one_byte_over():
    events = fixed_chunk(bytes(8193), make_config(Algorithm.FIXED, target_avg=8192))
    assert [e.position for e in events] == [8192, 8193]
    assert events[0].kind == BoundaryKind.MAX_FORCED
    assert events[1].kind == BoundaryKind.END_OF_STREAM


def test_rabin_roll_matches_recompute(small_random_data):
    hasher = RabinHash(48)
    h = hasher.compute(small_random_data[:48])
    for i in range(48, 2048):
        h = hasher.roll(h, small_random_data[i - 48], small_random_data[i])
        assert h == hasher.compute(small_random_data[i - 47 : i + 1])


def test_rabin_zero_data_falls_back_to_max_size():
    cfg = make_config(Algorithm.RABIN, target_avg=8192)
    events = chunk_stream(bytes(5 * cfg.max_size + 100), cfg)
    assert [e.kind for e in events[:-1]] == [BoundaryKind.MAX_FORCED] * 5
    assert all(n == cfg.max_size for n in chunk_lengths(events)[:-1])


def test_rabin_mean_within_twice_target(random_data):
    cfg = make_config(Algorithm.RABIN, target_avg=8192)
    assert 4096 <= mean_without_final(chunk_stream(random_data, cfg)) <= 16384


def test_gear_is_deterministic(small_random_data):
    assert list(gear_candidates(small_random_data, 8)) == list(gear_candidates(small_random_data, 8))


def test_gear_depends_only_on_last_64_bytes(small_random_data):
    prefix = random_bytes(0x1, 500)
    tail = small_random_data[:4096]
    shifted = {c - len(prefix) for c in gear_candidates(prefix + tail, 6) if c - len(prefix) >= 64}
    own = {c for c in gear_candidates(tail, 6) if c >= 64}
    assert shifted == own


def test_gear_mean_within_twice_target(random_data):
    cfg = make_config(Algorithm.GEAR, target_avg=8192)
    assert 4096 <= mean_without_final(chunk_stream(random_data, cfg)) <= 16384


def test_fastcdc_narrower_than_gear(megabyte):
    fastcdc = chunk_lengths(chunk_stream(megabyte, make_config(Algorithm.FASTCDC, target_avg=8192)))
    gear = chunk_lengths(chunk_stream(megabyte, make_config(Algorithm.GEAR, target_avg=8192)))
    assert iqr(fastcdc[:-1]) < iqr(gear[:-1])


def test_ae_increasing_data_forces_max_size():
    cfg = make_config(
        Algorithm.AE, target_avg=128, min_size=64, max_size=256, extremum={"window_size": 32}
    )
    events = chunk_stream(bytes(range(256)) * 4, cfg)
    assert [e.position for e in events] == [256, 512, 768, 1024]
    assert [e.kind for e in events[:3]] == [BoundaryKind.MAX_FORCED] * 3


def test_ae_constant_data_cuts_after_first_window():
    cfg = make_config(
        Algorithm.AE, target_avg=64, min_size=16, max_size=256, extremum={"window_size": 32}
    )
    events = chunk_stream(b"\x07" * 1000, cfg)
    assert events[0].position == 33
    assert events[0].kind == BoundaryKind.SEQUENCE


def test_ram_window_holding_max_byte_never_cuts():
    cfg = make_config(
        Algorithm.RAM, target_avg=128, min_size=64, max_size=256, extremum={"window_size": 32}
    )
    data = (bytes([255]) + bytes(range(15))) * 80
    events = chunk_stream(data, cfg)
    assert all(e.kind != BoundaryKind.SEQUENCE for e in events)


def test_ram_ramp_cuts_at_minimum():
    cfg = make_config(
        Algorithm.RAM, target_avg=128, min_size=64, max_size=256, extremum={"window_size": 16}
    )
    events = chunk_stream(bytes(range(256)) * 2, cfg)
    assert events[0].position == 64
    assert events[0].kind == BoundaryKind.SEQUENCE


@pytest.mark.parametrize("algorithm", [Algorithm.AE, Algorithm.RAM, Algorithm.FASTCDC])
def test_extremum_and_fastcdc_mean_within_twice_target(algorithm, random_data):
    cfg = make_config(algorithm, target_avg=8192)
    assert 4096 <= mean_without_final(chunk_stream(random_data, cfg)) <= 16384


@pytest.mark.parametrize("algorithm", ALL_ALGORITHMS)
def test_bounds_audit(algorithm, random_data):
    for target in (4096, 8192):
        cfg = make_config(algorithm, target_avg=target)
        events = chunk_stream(random_data, cfg)
        audit_events(random_data, events, cfg)
        assert events[-1].position == len(random_data)


@pytest.mark.parametrize("algorithm", ALL_ALGORITHMS)
def test_boundaries_are_deterministic(algorithm, small_random_data):
    cfg = make_config(algorithm, target_avg=4096)
    assert chunk_stream(small_random_data, cfg) == chunk_stream(small_random_data, cfg)
