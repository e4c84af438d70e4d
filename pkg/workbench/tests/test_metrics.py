import pytest

from app.core.exceptions import DedupError
from app.evaluation.metrics import (
    LocalityResults,
    LocalityTrial,
    build_histogram,
    space_savings,
    throughput_stats,
)


def test_space_savings():
    assert space_savings(100, 20) == pytest.approx(0.8)
    assert space_savings(100, 100) == 0.0
    assert space_savings(200, 100) == 0.5


def test_space_savings_zero_total():
    with pytest.raises(DedupError):
        space_savings(0, 0)


def test_space_savings_unique_out_of_range():
    with pytest.raises(DedupError):
        space_savings(100, 120)


def test_histogram_counts_and_quantiles():
    lengths = list(range(1, 101))
    histogram = build_histogram(lengths, bins=10)
    assert len(histogram.buckets) == 10
    assert sum(b.count for b in histogram.buckets) == 100
    assert histogram.count == 100
    assert histogram.mean == pytest.approx(50.5)
    assert histogram.quantiles.p50 == pytest.approx(50.5)
    assert histogram.quantiles.p1 <= histogram.quantiles.p25 <= histogram.quantiles.p99


def test_histogram_fixed_range():
    histogram = build_histogram([4096, 8192, 8192], bins=4, lower=1, upper=16384)
    assert histogram.buckets[0].lower == 1
    assert histogram.buckets[-1].upper == 16384
    assert sum(b.count for b in histogram.buckets) == 3


def test_histogram_of_identical_lengths():
    histogram = build_histogram([8192] * 5, bins=3)
    assert sum(b.count for b in histogram.buckets) == 5


def test_empty_histogram():
    histogram = build_histogram([])
    assert histogram.count == 0
    assert histogram.quantiles is None


def test_throughput_stats():
    stats = throughput_stats([1.0, 2.0, 3.0], backend="w32")
    assert stats.mean == pytest.approx(2.0)
    assert stats.stddev == pytest.approx(1.0)
    assert stats.backend == "w32"
    assert stats.relative_stddev == pytest.approx(0.5)
    assert throughput_stats([4.0]).stddev == 0.0


def test_locality_results():
    results = LocalityResults(
        algorithm="seq",
        trials=[LocalityTrial(1, 10), LocalityTrial(2, 10), LocalityTrial(9, 10)],
    )
    assert results.share_within(2) == pytest.approx(2 / 3)
    summary = results.to_dict()
    assert summary["median_new_chunks"] == 2.0
    assert summary["max_new_chunks"] == 9
    assert "Algorithm: seq" in str(results)
