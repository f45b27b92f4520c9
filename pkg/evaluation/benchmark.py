"""
Cross-validated benchmark.

Every (dataset, measure, epochs) cell trains one fresh measure per split of a
repeated stratified k-fold and records the validation retrieval loss. Splits
are independent tasks; with ``jobs > 1`` they run in a process pool and the
aggregation below is the only place their results meet.

Seeds:
    folds of a dataset      derive_seed(master, dataset, "folds")
    one split's networks    derive_seed(master, dataset, measure, split, epochs)

Neither depends on the optimizer, alpha or pair mode, so sweeps over those
compare runs on identical splits and initial weights.
"""
from __future__ import annotations

import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from core.artifact_store import ArtifactStore
from core.config import RunConfig
from core.dataset_registry import DatasetRegistry
from core.log import RunLogger, is_quiet, set_quiet
from core.resilience import Diagnostic, SafeExecutor
from data.dataset import Dataset, normalize_fold
from data.fetch import load_registered
from data.folds import Split, stratified_kfold
from evaluation.retrieval import retrieval_loss
from measures.registry import measure_for_dataset
from measures.training import TrainingHistory, train_measure

CSV_COLUMNS = (
    "dataset",
    "measure",
    "epochs",
    "variant",
    "status",
    "mean_loss",
    "std_loss",
    "n_splits",
    "split_losses",
    "optimizer",
    "alpha",
    "pair_mode",
    "seed",
    "diagnostic",
)


def derive_seed(master: int, *parts: Any) -> int:
    """Stable 32-bit seed from the master seed and any mix of names and ints."""
    entropy = [int(master) % (2 ** 32)]
    for part in parts:
        if isinstance(part, str):
            entropy.append(zlib.crc32(part.encode("utf-8")))
        else:
            entropy.append(int(part))
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def folds_for(ds: Dataset, cfg: RunConfig) -> List[Split]:
    return stratified_kfold(ds, cfg.k, cfg.repeats, seed=derive_seed(cfg.seed, ds.name, "folds"))


def split_data(ds: Dataset, split: Split, cfg: RunConfig) -> Dataset:
    """The dataset as seen by one split (re-scaled from its training rows in strict mode)."""
    if cfg.strict_normalization:
        return normalize_fold(ds, split.train_ids)
    return ds


@dataclass
class SplitTask:
    dataset: str
    measure: str
    epochs: int
    split: Split
    seed: int
    config: RunConfig
    variant: str = ""

    @property
    def cell_key(self) -> Tuple[str, str, str, int]:
        return (self.variant, self.dataset, self.measure, self.epochs)


@dataclass
class SplitOutcome:
    ok: bool
    loss: Optional[float] = None
    seconds: float = 0.0
    history: Optional[TrainingHistory] = None
    diagnostic: Optional[Diagnostic] = None


def train_split(ds: Dataset, task: SplitTask, logger: Optional[RunLogger] = None):
    """Train the task's measure on its split; returns (measure, data, history)."""
    cfg = task.config
    data = split_data(ds, task.split, cfg)
    measure = measure_for_dataset(task.measure, data, cfg, task.seed)
    _, history = train_measure(
        measure,
        data,
        task.split.train_ids,
        pair_mode=cfg.pair_mode,
        optimizer=cfg.optimizer,
        epochs=task.epochs if measure.learned else 0,
        seed=task.seed,
        optimizer_params=cfg.optimizer_params,
        batch_size=cfg.batch_size,
        val_ids=task.split.val_ids,
        eval_every=cfg.eval_every,
        resample_pairs=cfg.resample_pairs,
        chunk=cfg.pair_chunk,
        logger=logger,
        report_every=cfg.report_every,
    )
    return measure, data, history


def _score_split(ds: Dataset, task: SplitTask) -> Tuple[float, TrainingHistory]:
    measure, data, history = train_split(ds, task)
    return retrieval_loss(measure, data, task.split.train_ids, task.split.val_ids), history


def run_split(ds: Dataset, task: SplitTask) -> SplitOutcome:
    start = time.perf_counter()
    ok, result = SafeExecutor.safe_execute(_score_split, ds, task)
    seconds = time.perf_counter() - start
    if not ok:
        return SplitOutcome(ok=False, seconds=seconds, diagnostic=result)
    loss, history = result
    return SplitOutcome(ok=True, loss=float(loss), seconds=seconds, history=history)


def _init_worker(quiet: bool) -> None:
    set_quiet(quiet)


def execute_tasks(tasks: Sequence[SplitTask], datasets: Mapping[str, Dataset], jobs: int = 1) -> List[SplitOutcome]:
    """Outcomes in task order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [run_split(datasets[t.dataset], t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(is_quiet(),)) as pool:
        futures = [pool.submit(run_split, datasets[t.dataset], t) for t in tasks]
        return [f.result() for f in futures]


@dataclass
class BenchmarkCell:
    dataset: str
    measure: str
    epochs: int
    variant: str = ""
    losses: List[float] = field(default_factory=list)
    split_seeds: List[int] = field(default_factory=list)
    wall_clock: float = 0.0
    diagnostic: Optional[str] = None
    snapshot: Dict[str, Any] = field(default_factory=dict)
    histories: List[TrainingHistory] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.diagnostic is None

    @property
    def status(self) -> str:
        return "ok" if self.ok else "failed"

    @property
    def mean(self) -> Optional[float]:
        if not self.ok or not self.losses:
            return None
        return float(np.mean(self.losses))

    @property
    def std(self) -> Optional[float]:
        if not self.ok or not self.losses:
            return None
        if len(self.losses) < 2:
            return 0.0
        return float(np.std(self.losses, ddof=1))

    def to_row(self) -> Dict[str, Any]:
        return {
            "dataset": self.dataset,
            "measure": self.measure,
            "epochs": self.epochs,
            "variant": self.variant,
            "status": self.status,
            "mean_loss": self.mean,
            "std_loss": self.std,
            "n_splits": len(self.losses),
            "split_losses": ";".join(repr(v) for v in self.losses),
            "optimizer": self.snapshot.get("optimizer"),
            "alpha": self.snapshot.get("alpha"),
            "pair_mode": self.snapshot.get("pair_mode"),
            "seed": self.snapshot.get("seed"),
            "diagnostic": self.diagnostic or "",
        }

    def to_dict(self) -> Dict[str, Any]:
        out = self.to_row()
        out["split_losses"] = list(self.losses)
        out["split_seeds"] = list(self.split_seeds)
        out["wall_clock_seconds"] = self.wall_clock
        out["snapshot"] = dict(self.snapshot)
        return out


def _snapshot(cfg: RunConfig, seeds: Sequence[int], folds_seed: int) -> Dict[str, Any]:
    return {
        "seed": cfg.seed,
        "folds_seed": folds_seed,
        "split_seeds": list(seeds),
        "optimizer": cfg.optimizer,
        "optimizer_params": dict(cfg.optimizer_params),
        "batch_size": cfg.batch_size,
        "alpha": cfg.alpha,
        "pair_mode": cfg.pair_mode,
        "hidden": list(cfg.hidden),
        "k": cfg.k,
        "repeats": cfg.repeats,
        "strict_normalization": cfg.strict_normalization,
    }


def aggregate(tasks: Sequence[SplitTask], outcomes: Sequence[SplitOutcome]) -> List[BenchmarkCell]:
    """Group split outcomes into cells in first-seen order; one failed split fails its cell."""
    cells: Dict[Tuple[str, str, str, int], BenchmarkCell] = {}
    for task, outcome in zip(tasks, outcomes):
        cell = cells.get(task.cell_key)
        if cell is None:
            cell = BenchmarkCell(dataset=task.dataset, measure=task.measure, epochs=task.epochs, variant=task.variant)
            cells[task.cell_key] = cell
        cell.wall_clock += outcome.seconds
        cell.split_seeds.append(task.seed)
        if not outcome.ok:
            if cell.diagnostic is None:
                cell.diagnostic = f"split {task.split.index}: {outcome.diagnostic.summary()}"
            continue
        cell.losses.append(outcome.loss)
        if outcome.history is not None:
            cell.histories.append(outcome.history)
    for task in tasks:
        cell = cells[task.cell_key]
        if not cell.snapshot:
            cell.snapshot = _snapshot(task.config, cell.split_seeds, derive_seed(task.config.seed, task.dataset, "folds"))
    for cell in cells.values():
        if not cell.ok:
            cell.losses = []
            cell.histories = []
    return list(cells.values())


def build_tasks(
    datasets: Mapping[str, Dataset],
    measures: Iterable[str],
    epochs_list: Iterable[int],
    cfg: RunConfig,
    variant: str = "",
) -> Tuple[List[SplitTask], List[BenchmarkCell]]:
    """
    Tasks for every cell, plus failed cells for datasets whose folds cannot be
    built (e.g. a class smaller than k).
    """
    tasks: List[SplitTask] = []
    failed: List[BenchmarkCell] = []
    measures = list(measures)
    epochs_list = [int(e) for e in epochs_list]
    for name, ds in datasets.items():
        ok, splits = SafeExecutor.safe_execute(folds_for, ds, cfg)
        if not ok:
            for m in measures:
                for e in epochs_list:
                    failed.append(BenchmarkCell(
                        dataset=name, measure=m, epochs=e, variant=variant,
                        diagnostic=f"folds: {splits.summary()}",
                        snapshot=_snapshot(cfg, [], derive_seed(cfg.seed, name, "folds")),
                    ))
            continue
        for m in measures:
            for e in epochs_list:
                for split in splits:
                    seed = derive_seed(cfg.seed, name, m, split.index, e)
                    tasks.append(SplitTask(name, m, e, split, seed, cfg, variant))
    return tasks, failed


def run_cells(
    datasets: Mapping[str, Dataset],
    measures: Iterable[str],
    epochs_list: Iterable[int],
    cfg: RunConfig,
    variant: str = "",
    logger: Optional[RunLogger] = None,
) -> List[BenchmarkCell]:
    log = logger or RunLogger("benchmark")
    tasks, failed = build_tasks(datasets, measures, epochs_list, cfg, variant)
    log.info(f"{len(tasks)} split task(s) on {cfg.jobs} worker(s)")
    cells = aggregate(tasks, execute_tasks(tasks, datasets, cfg.jobs)) + failed
    for cell in cells:
        cell_log = log.child(cell.dataset, cell.measure)
        label = f"{cell.variant} " if cell.variant else ""
        if cell.ok:
            cell_log.success(f"{label}epochs={cell.epochs} mean={cell.mean:.4f} std={cell.std:.4f} ({len(cell.losses)} splits)")
        else:
            cell_log.error(f"{label}epochs={cell.epochs} failed: {cell.diagnostic}")
    return cells


@dataclass
class BenchmarkReport:
    cells: List[BenchmarkCell]
    config: Dict[str, Any]
    datasets: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    wall_clock: float = 0.0

    def cell(self, dataset: str, measure: str, epochs: int, variant: str = "") -> Optional[BenchmarkCell]:
        for c in self.cells:
            if (c.dataset, c.measure, c.epochs, c.variant) == (dataset, measure, int(epochs), variant):
                return c
        return None

    @property
    def dataset_names(self) -> List[str]:
        return list(dict.fromkeys(c.dataset for c in self.cells))

    @property
    def measure_names(self) -> List[str]:
        return list(dict.fromkeys(c.measure for c in self.cells))

    @property
    def epoch_budgets(self) -> List[int]:
        return list(dict.fromkeys(c.epochs for c in self.cells))

    def csv_rows(self) -> List[Dict[str, Any]]:
        return [c.to_row() for c in self.cells]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": dict(self.config),
            "datasets": dict(self.datasets),
            "cells": [c.to_dict() for c in self.cells],
            "wall_clock_seconds": self.wall_clock,
        }


def load_datasets(cfg: RunConfig, registry: Optional[DatasetRegistry] = None) -> Dict[str, Dataset]:
    registry = registry or DatasetRegistry()
    return {e.key: load_registered(e.key, cfg.data_dir, registry) for e in registry.resolve(cfg.datasets)}


def run_benchmark(
    cfg: RunConfig,
    datasets: Optional[Mapping[str, Dataset]] = None,
    logger: Optional[RunLogger] = None,
) -> BenchmarkReport:
    """
    Run every (dataset, measure, epochs) cell of ``cfg``. Datasets are loaded
    from the registry unless given; one failing split only fails its cell.
    """
    log = logger or RunLogger("benchmark")
    start = time.perf_counter()
    if datasets is None:
        datasets = load_datasets(cfg)
    cells = run_cells(datasets, cfg.measures, cfg.epochs, cfg, logger=log)
    order = {(d, m, e): i for i, (d, m, e) in enumerate(
        (d, m, int(e)) for d in datasets for m in cfg.measures for e in cfg.epochs
    )}
    cells.sort(key=lambda c: order.get((c.dataset, c.measure, c.epochs), len(order)))
    return BenchmarkReport(
        cells=cells,
        config=cfg.to_dict(),
        datasets={name: dict(ds.provenance) for name, ds in datasets.items()},
        wall_clock=time.perf_counter() - start,
    )


def save_report(report: BenchmarkReport, store: ArtifactStore, stem: str = "benchmark") -> List[str]:
    """CSV (no timings, byte-stable), JSON (full report) and one table per epoch budget."""
    from evaluation.report import render_table

    paths = [
        store.save_csv(f"{stem}.csv", report.csv_rows(), CSV_COLUMNS),
        store.save_json(f"{stem}.json", report.to_dict()),
    ]
    for epochs in report.epoch_budgets:
        paths.append(store.save_text(f"{stem}_table_e{epochs}.md", render_table(report, epochs)))
    return paths
