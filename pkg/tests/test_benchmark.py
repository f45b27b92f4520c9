from __future__ import annotations

import numpy as np
import pandas as pd
import pytest

import evaluation.benchmark as benchmark
from conftest import make_blobs
from core.artifact_store import ArtifactStore
from core.config import RunConfig
from evaluation.benchmark import (
    BenchmarkCell,
    BenchmarkReport,
    build_tasks,
    derive_seed,
    run_benchmark,
    save_report,
)
from evaluation.report import highlighted, relative_losses, render_table


def small_config(tmp_path=None, **changes):
    values = dict(
        measures=["t11", "esnn"],
        epochs=[5],
        k=3,
        repeats=2,
        seed=1,
        jobs=1,
        output_dir=str(tmp_path or "results"),
    )
    values.update(changes)
    return RunConfig(**values).validate()


def datasets():
    return {"blobs": make_blobs(name="blobs", spread=0.15)}


def test_cells_follow_config_order_and_count_splits():
    report = run_benchmark(small_config(), datasets())
    assert [(c.dataset, c.measure, c.epochs) for c in report.cells] == [("blobs", "t11", 5), ("blobs", "esnn", 5)]
    for cell in report.cells:
        assert cell.ok
        assert len(cell.losses) == 6
        assert cell.mean == pytest.approx(np.mean(cell.losses))
        assert cell.std == pytest.approx(np.std(cell.losses, ddof=1))


def test_csv_is_byte_identical_across_runs(tmp_path):
    contents = []
    for run in ("a", "b"):
        store = ArtifactStore(str(tmp_path / run))
        save_report(run_benchmark(small_config(), datasets()), store)
        contents.append(open(store.path("benchmark.csv"), "rb").read())
    assert contents[0] == contents[1]


def test_csv_means_are_recomputable(tmp_path):
    store = ArtifactStore(str(tmp_path))
    paths = save_report(run_benchmark(small_config(), datasets()), store)
    assert [p.rsplit("/", 1)[-1] for p in paths] == ["benchmark.csv", "benchmark.json", "benchmark_table_e5.md"]
    frame = pd.read_csv(store.path("benchmark.csv"), float_precision="round_trip")
    assert "wall_clock_seconds" not in frame.columns
    for _, row in frame.iterrows():
        losses = [float(v) for v in row["split_losses"].split(";")]
        assert row["mean_loss"] == np.mean(losses)
    doc = store.load_json("benchmark.json")
    assert all("wall_clock_seconds" in c for c in doc["cells"])
    assert doc["config"]["seed"] == 1


def test_training_free_measures_ignore_epoch_budget():
    report = run_benchmark(small_config(measures=["t11", "t21"], epochs=[0, 7]), datasets())
    for m in ("t11", "t21"):
        assert report.cell("blobs", m, 0).losses == report.cell("blobs", m, 7).losses


def test_split_seeds_do_not_depend_on_optimizer_or_alpha():
    ds = datasets()
    base, _ = build_tasks(ds, ["esnn"], [5], small_config())
    other, _ = build_tasks(ds, ["esnn"], [5], small_config(alpha=0.6, optimizer="adam", pair_mode="sampled-10"))
    assert [t.seed for t in base] == [t.seed for t in other]
    assert len({t.seed for t in base}) == len(base)
    assert base[0].seed == derive_seed(1, "blobs", "esnn", 0, 5)


def test_failed_split_fails_only_its_cell(monkeypatch):
    original = benchmark._score_split

    def flaky(ds, task):
        if task.measure == "esnn" and task.split.index == 2:
            raise FloatingPointError("diverged")
        return original(ds, task)

    monkeypatch.setattr(benchmark, "_score_split", flaky)
    report = run_benchmark(small_config(), datasets())
    esnn = report.cell("blobs", "esnn", 5)
    assert not esnn.ok
    assert esnn.losses == []
    assert "split 2" in esnn.diagnostic and "FloatingPointError" in esnn.diagnostic
    assert report.cell("blobs", "t11", 5).ok
    assert "failed" in render_table(report, 5)


def test_unstratifiable_dataset_fails_its_cells():
    ds = datasets()
    ds["tiny"] = make_blobs(n_per_class=2, name="tiny")
    report = run_benchmark(small_config(), ds)
    assert report.cell("blobs", "t11", 5).ok
    tiny = report.cell("tiny", "t11", 5)
    assert tiny.status == "failed"
    assert tiny.diagnostic.startswith("folds:")


@pytest.mark.slow
def test_parallel_run_matches_serial():
    serial = run_benchmark(small_config(), datasets())
    parallel = run_benchmark(small_config(jobs=2), datasets())
    assert serial.csv_rows() == parallel.csv_rows()


def cell(dataset, measure, losses, diagnostic=None):
    return BenchmarkCell(dataset=dataset, measure=measure, epochs=200, losses=list(losses), diagnostic=diagnostic)


def test_table_highlights_best_and_cells_within_its_std():
    report = BenchmarkReport(
        cells=[
            cell("d1", "m1", [0.1, 0.3]),
            cell("d1", "m2", [0.3, 0.3]),
            cell("d1", "m3", [0.5, 0.5]),
        ],
        config={"k": 5, "repeats": 5},
    )
    assert highlighted([report.cell("d1", m, 200) for m in ("m1", "m2", "m3")]) == [True, True, False]
    table = render_table(report, 200)
    assert "**0.20 (0.14)**" in table
    assert "**0.30 (0.00)**" in table
    assert "| 0.50 (0.00) |" in table
    assert "Average loss relative to the best measure (m1): m1 1.00, m2 1.50, m3 2.50" in table


def test_highlight_needs_a_gap_strictly_below_the_best_std():
    best = cell("d1", "m1", [0.0, 0.5, 1.0])  # mean 0.5, std 0.5
    at_edge = cell("d1", "m2", [1.0, 1.0, 1.0])
    inside = cell("d1", "m3", [0.75, 0.75, 0.75])
    assert highlighted([best, at_edge, inside]) == [True, False, True]

    tied = [cell("d1", "m1", [0.2, 0.2]), cell("d1", "m2", [0.2, 0.2]), cell("d1", "m3", [0.3, 0.3])]
    assert highlighted(tied) == [True, True, False]


def test_failed_cell_blanks_column_totals():
    report = BenchmarkReport(
        cells=[
            cell("d1", "m1", [0.2, 0.2]),
            cell("d2", "m1", [0.4, 0.4]),
            cell("d1", "m2", [], diagnostic="split 0: ValueError: boom"),
            cell("d2", "m2", [0.1, 0.1]),
        ],
        config={},
    )
    table = render_table(report, 200)
    assert "| Sum | 0.60 | n/a |" in table
    assert "| Average | 0.30 | n/a |" in table
    assert "- d1/m2: split 0: ValueError: boom" in table
    assert relative_losses({"a": {"average": 0.0}, "b": {"average": 0.2}}) == {"a": 1.0, "b": float("inf")}
