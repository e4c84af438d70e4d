import pytest

from app.core.config import settings
from app.core.exceptions import ConfigurationError, TunerError
from app.models import SeqMode, SeqParams
from app.services import tuner
from app.services.chunker import simulate_chunk_lengths
from app.services.corpus import random_bytes


@pytest.fixture
def small_sample(monkeypatch):
    monkeypatch.setattr(settings, "tuner_min_sample_bytes", 8 * 1024 * 1024)
    monkeypatch.setattr(settings, "tuner_segment_bytes", 2 * 1024 * 1024)


def test_tune_hits_target(small_sample):
    result = tuner.tune(8192, SeqMode.INCREASING)
    best = result.candidates[0]
    assert best.validated
    assert best.params == result.chosen
    assert abs(best.simulated_mean - 8192) <= 0.10 * 8192
    assert result.reference is not None
    assert result.reference.params.skip_trigger == 50

    # validated finalists first, each group ordered by distance to the target
    validated = [c for c in result.candidates if c.validated]
    explored = [c for c in result.candidates if not c.validated]
    assert result.candidates == validated + explored
    for group in (validated, explored):
        errors = [c.error(8192) for c in group]
        assert errors == sorted(errors)

    # replay on data the search never saw
    held_out = random_bytes(0xF8E5, 4 * 1024 * 1024)
    lengths = simulate_chunk_lengths(held_out, result.chosen, 4096, 16384)
    assert abs(lengths.mean() - 8192) <= 0.10 * 8192


def test_sample_too_small(small_sample):
    with pytest.raises(ConfigurationError):
        tuner.tune(8192, sample_size=1024)


def test_unreachable_target(small_sample, monkeypatch):
    monkeypatch.setattr(settings, "tuner_min_sample_bytes", 2 * 1024 * 1024)
    monkeypatch.setattr(settings, "tuner_error_tolerance", 1e-6)
    monkeypatch.setattr(tuner, "SEQ_LENGTHS", (5,))
    monkeypatch.setattr(tuner, "SKIP_SIZES", (256,))
    with pytest.raises(TunerError):
        tuner.tune(4096)


def test_published_params_fall_short_of_8k():
    # the published 8 KiB row simulates to roughly 4.5 KiB on random data
    data = random_bytes(0x8C, 4 * 1024 * 1024)
    lengths = simulate_chunk_lengths(
        data, SeqParams(seq_length=5, skip_trigger=50, skip_size=256), 4096, 16384
    )
    assert 4096 < lengths.mean() < 0.7 * 8192


def test_seq_params_for_sources(monkeypatch):
    calls = []

    def fake_tune(target_avg, mode=SeqMode.INCREASING, sample_size=None, seed=None):
        calls.append((target_avg, mode))
        chosen = SeqParams(mode=mode, seq_length=6, skip_trigger=60, skip_size=512)
        return tuner.TunerResult(
            target_avg=target_avg, sample_size=0, candidates=[], chosen=chosen
        )

    monkeypatch.setattr(tuner, "tune", fake_tune)
    tuner.tuned_params.cache_clear()
    try:
        assert tuner.seq_params_for(8192, source="published") is None
        first = tuner.seq_params_for(8192, source="tuned")
        again = tuner.seq_params_for(8192, source="TUNED")
        assert first == again
        assert first.seq_length == 6
        assert calls == [(8192, SeqMode.INCREASING)]

        monkeypatch.setattr(settings, "seq_param_source", "tuned")
        assert tuner.seq_params_for(8192) == first
        with pytest.raises(ConfigurationError):
            tuner.seq_params_for(8192, source="guessed")
    finally:
        tuner.tuned_params.cache_clear()


def test_mean_grows_with_seq_length():
    data = random_bytes(0x3A, 1024 * 1024)
    means = [
        simulate_chunk_lengths(
            data, SeqParams(seq_length=length, skip_trigger=50, skip_size=256), 4096, 16384
        ).mean()
        for length in (3, 5)
    ]
    assert means[0] < means[1]


def test_sample_segments_cover_sample():
    segments = list(tuner.sample_segments(1, 10_000, 4096))
    assert [len(s) for s in segments] == [4096, 4096, 1808]
    assert len(set(segments)) == 3
