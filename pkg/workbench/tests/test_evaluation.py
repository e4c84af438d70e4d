import pandas as pd
import pytest

from app.core.exceptions import ConfigurationError
from app.evaluation import byte_shift, runner as runner_module
from app.evaluation.byte_shift import run_byte_shift
from app.evaluation.metrics import LocalityTrial
from app.evaluation.runner import RESULTS_CSV, ExperimentRunner
from app.models import Algorithm, CorpusManifest, MutationSpec, RunReport, SeqParams, make_config
from app.services.corpus import gen_corpus
from app.services.throughput import measure_throughput


@pytest.fixture(scope="module")
def versioned_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    manifest = CorpusManifest(
        seed=0xC0DE,
        versions=3,
        base_size=96 * 1024,
        mutation_spec=[MutationSpec(op="replace", count=2, mean_length=16)],
    )
    gen_corpus(manifest, out)
    return out


def test_grid_writes_reports_and_csv(versioned_corpus, tmp_path):
    runner = ExperimentRunner(runs=1, backend="scalar", workers=1, host={"machine": "test"})
    results = runner.run(
        versioned_corpus, [Algorithm.FIXED, Algorithm.SEQ], [4096], out_dir=tmp_path
    )
    assert len(results.reports) == 2
    assert not results.failures

    frame = pd.read_csv(tmp_path / RESULTS_CSV)
    assert sorted(frame["algorithm"]) == ["fixed", "seq"]
    assert (frame["throughput_gbps"] > 0).all()

    text = (tmp_path / "seq_4096.json").read_text()
    report = RunReport.from_json(text)
    assert report.corpus.startswith("synthetic-")
    assert report.host == {"machine": "test"}
    assert report.to_json() == text


def test_rerun_gives_identical_savings(versioned_corpus):
    runner = ExperimentRunner(runs=1, backend="scalar", workers=1, host={})
    first = runner.run(versioned_corpus, [Algorithm.SEQ], [4096, 8192])
    second = runner.run(versioned_corpus, [Algorithm.SEQ], [4096, 8192])
    assert [r.space_savings for r in first.reports] == [r.space_savings for r in second.reports]


def test_failed_cell_is_recorded(tmp_path):
    runner = ExperimentRunner(runs=1, backend="scalar", workers=1, host={})
    results = runner.run(tmp_path / "missing", [Algorithm.FIXED], [4096])
    assert results.reports == []
    assert results.failures[0].path == "fixed_4096"
    assert "error" in results.to_frame().columns


def test_report_json_keys(versioned_corpus):
    runner = ExperimentRunner(runs=1, backend="scalar", workers=1, host={})
    report = runner.run(versioned_corpus, [Algorithm.FIXED], [8192]).reports[0]
    keys = set(report.model_dump())
    assert {
        "corpus", "algorithm", "params", "total_bytes", "chunk_count", "unique_chunks",
        "unique_bytes", "space_savings", "mean_chunk", "histogram", "throughput",
        "backend", "host", "version",
    } <= keys
    assert set(report.throughput.model_dump()) >= {"runs", "mean", "stddev"}


def test_reports_carry_bitop_timings(versioned_corpus):
    runner = ExperimentRunner(runs=1, backend="scalar", workers=1)
    report = runner.run(versioned_corpus, [Algorithm.FIXED], [4096]).reports[0]
    timings = report.host["bitops_ns_per_op"]
    assert set(timings) == {"first_set_bit", "select_kth_set_bit", "popcount"}
    assert all(ns > 0 for ns in timings.values())
    assert report.host["lane_widths"] == runner.host["lane_widths"]


def test_seq_param_source_is_recorded(versioned_corpus, monkeypatch):
    tuned = SeqParams(seq_length=4, skip_trigger=30, skip_size=128)
    monkeypatch.setattr(
        runner_module, "seq_params_for",
        lambda target, source=None: tuned if source == "tuned" else None,
    )
    runner = ExperimentRunner(
        runs=1, backend="scalar", workers=1, host={}, seq_param_source="tuned"
    )
    results = runner.run(versioned_corpus, [Algorithm.FIXED, Algorithm.SEQ], [4096])
    fixed, seq = results.reports
    assert "param_source" not in fixed.params
    assert seq.params["param_source"] == "tuned"
    assert (seq.params["seq_length"], seq.params["skip_trigger"]) == (4, 30)

    published = ExperimentRunner(runs=1, backend="scalar", workers=1, host={})
    report = published.run(versioned_corpus, [Algorithm.SEQ], [4096]).reports[0]
    assert report.params["param_source"] == "published"
    assert report.params["skip_trigger"] == 55


def test_throughput_runs(small_random_data):
    stats = measure_throughput(small_random_data, make_config(Algorithm.FIXED), runs=3)
    assert len(stats.runs) == 3
    assert all(r > 0 for r in stats.runs)
    assert stats.backend == "scalar"


def test_throughput_rejects_empty_buffer():
    with pytest.raises(ConfigurationError):
        measure_throughput(b"", make_config(Algorithm.FIXED))


def test_byte_shift_locality_on_recorded_run():
    # same seed and size as the recorded 100-trial run, so these are its first trials
    results = run_byte_shift([Algorithm.FIXED, Algorithm.SEQ], target_avg=8192, trials=12)
    seq = results["seq"]
    fixed = results["fixed"]
    assert len(seq.trials) == 12
    for trial in seq.trials:
        assert 1 <= trial.new_chunks
        assert trial.changed_fraction <= 0.1
    assert seq.to_dict()["mean_changed_fraction"] < fixed.to_dict()["mean_changed_fraction"]


def test_fixed_size_changes_every_chunk_after_insertion():
    size = 1024 * 1024
    results = run_byte_shift([Algorithm.FIXED], target_avg=8192, trials=15, data_size=size)
    fixed = results["fixed"]
    expected = []
    for trial in fixed.trials:
        assert trial.new_chunks == trial.total_chunks - trial.offset // 8192
        expected.append(trial.new_chunks / trial.total_chunks)
    assert fixed.to_dict()["mean_changed_fraction"] == pytest.approx(
        sum(expected) / len(expected), abs=1e-4
    )


@pytest.mark.parametrize(
    "algorithm",
    [Algorithm.RABIN, Algorithm.GEAR, Algorithm.FASTCDC, Algorithm.AE, Algorithm.RAM],
)
def test_cdc_baselines_keep_single_byte_edits_local(algorithm):
    results = run_byte_shift(
        [algorithm], target_avg=8192, trials=10, data_size=512 * 1024, insert_length=1
    )
    outcome = results[algorithm.value]
    assert outcome.share_within(3) >= 0.9
    assert outcome.to_dict()["max_new_chunks"] <= 8


def test_tuned_seq_params_reach_the_locality_run(monkeypatch):
    tuned = SeqParams(seq_length=6, skip_trigger=60, skip_size=512)
    monkeypatch.setattr(byte_shift, "seq_params_for", lambda target, source=None: tuned)
    seen = []

    def record_trial(original, known, cfg, offset, inserted):
        seen.append(cfg.seq)
        return LocalityTrial(new_chunks=1, total_chunks=1, offset=offset)

    monkeypatch.setattr(byte_shift, "insertion_trial", record_trial)
    run_byte_shift([Algorithm.SEQ], trials=2, data_size=64 * 1024, seq_param_source="tuned")
    assert seen == [tuned, tuned]


def test_byte_shift_rejects_bad_arguments():
    with pytest.raises(ConfigurationError):
        run_byte_shift([Algorithm.SEQ], trials=0)
