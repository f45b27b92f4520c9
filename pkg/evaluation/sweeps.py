"""
eSNN parameter studies on one dataset: the alpha sweep and the optimizer
comparison. Both reuse the benchmark task machinery, so every variant runs
on the same folds with the same initial weights.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from core.config import RunConfig
from core.errors import ConfigError
from core.log import RunLogger
from data.dataset import Dataset
from evaluation.benchmark import BenchmarkCell, aggregate, build_tasks, execute_tasks
from measures.esnn import DEFAULT_ALPHA, check_alpha


def alpha_grid(points: int, single: float = DEFAULT_ALPHA) -> List[float]:
    """``points`` evenly spaced values covering [0, 1]; a one-point grid is just ``single``."""
    if points < 1:
        raise ConfigError(f"alpha grid needs at least one point, got {points}")
    if points == 1:
        return [check_alpha(single)]
    return [float(a) for a in np.linspace(0.0, 1.0, points)]


def _variant_cells(ds: Dataset, variants: Dict[str, RunConfig], epochs: int, log: RunLogger) -> Dict[str, BenchmarkCell]:
    tasks, failed = [], []
    for label, cfg in variants.items():
        t, f = build_tasks({ds.name: ds}, ["esnn"], [epochs], cfg, variant=label)
        tasks.extend(t)
        failed.extend(f)
    jobs = next(iter(variants.values())).jobs
    log.info(f"{len(variants)} variant(s), {len(tasks)} split task(s) on {jobs} worker(s)")
    cells = aggregate(tasks, execute_tasks(tasks, {ds.name: ds}, jobs)) + failed
    return {c.variant: c for c in cells}


@dataclass
class AlphaPoint:
    alpha: float
    cell: BenchmarkCell

    def to_row(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "mean_loss": self.cell.mean,
            "std_loss": self.cell.std,
            "status": self.cell.status,
        }


@dataclass
class AlphaSweepResult:
    dataset: str
    epochs: int
    points: List[AlphaPoint]
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def best(self) -> Optional[AlphaPoint]:
        ok = [p for p in self.points if p.cell.ok]
        return min(ok, key=lambda p: (p.cell.mean, p.alpha)) if ok else None

    def curve_rows(self) -> List[Dict[str, Any]]:
        return [p.to_row() for p in self.points]

    def to_dict(self) -> Dict[str, Any]:
        best = self.best
        return {
            "dataset": self.dataset,
            "epochs": self.epochs,
            "best_alpha": best.alpha if best else None,
            "points": [dict(p.to_row(), split_losses=list(p.cell.losses), diagnostic=p.cell.diagnostic) for p in self.points],
            "config": dict(self.config),
        }


def alpha_sweep(ds: Dataset, grid: Sequence[float], cfg: RunConfig, logger: Optional[RunLogger] = None) -> AlphaSweepResult:
    """One cross-validated eSNN run per alpha at the first epoch budget of ``cfg``."""
    if not grid:
        raise ConfigError("alpha grid is empty")
    grid = [check_alpha(a) for a in grid]
    log = logger or RunLogger("sweep-alpha", ds.name)
    epochs = int(cfg.epochs[0])
    variants = {f"alpha={a!r}": cfg.replace(alpha=a) for a in grid}
    cells = _variant_cells(ds, variants, epochs, log)
    points = [AlphaPoint(alpha=a, cell=cells[f"alpha={a!r}"]) for a in grid]
    result = AlphaSweepResult(dataset=ds.name, epochs=epochs, points=points, config=cfg.to_dict())
    if result.best is not None:
        log.success(f"lowest mean loss {result.best.cell.mean:.4f} at alpha={result.best.alpha:g}")
    return result


@dataclass
class OptimizerCurve:
    optimizer: str
    cell: BenchmarkCell
    train_loss: List[float] = field(default_factory=list)
    val_epochs: List[int] = field(default_factory=list)
    val_loss: List[float] = field(default_factory=list)

    @classmethod
    def from_cell(cls, optimizer: str, cell: BenchmarkCell) -> "OptimizerCurve":
        curve = cls(optimizer=optimizer, cell=cell)
        if not cell.ok or not cell.histories:
            return curve
        curve.train_loss = [float(v) for v in np.mean([h.train_loss for h in cell.histories], axis=0)]
        curve.val_epochs = list(cell.histories[0].val_epochs)
        if curve.val_epochs:
            curve.val_loss = [float(v) for v in np.mean([h.val_loss for h in cell.histories], axis=0)]
        return curve

    def rows(self) -> List[Dict[str, Any]]:
        val = dict(zip(self.val_epochs, self.val_loss))
        return [
            {"optimizer": self.optimizer, "epoch": e, "train_loss": loss, "val_retrieval_loss": val.get(e)}
            for e, loss in enumerate(self.train_loss, start=1)
        ]


@dataclass
class OptimizerComparison:
    dataset: str
    epochs: int
    curves: List[OptimizerCurve]
    config: Dict[str, Any] = field(default_factory=dict)

    def curve_rows(self) -> List[Dict[str, Any]]:
        rows: List[Dict[str, Any]] = []
        for curve in self.curves:
            rows.extend(curve.rows())
        return rows

    def summary_rows(self) -> List[Dict[str, Any]]:
        return [
            {"optimizer": c.optimizer, "status": c.cell.status, "mean_loss": c.cell.mean, "std_loss": c.cell.std}
            for c in self.curves
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dataset": self.dataset,
            "epochs": self.epochs,
            "optimizers": [
                dict(
                    row,
                    split_losses=list(c.cell.losses),
                    diagnostic=c.cell.diagnostic,
                    train_loss=c.train_loss,
                    val_epochs=c.val_epochs,
                    val_loss=c.val_loss,
                )
                for row, c in zip(self.summary_rows(), self.curves)
            ],
            "config": dict(self.config),
        }


def compare_optimizers(
    ds: Dataset,
    optimizers: Sequence[str],
    cfg: RunConfig,
    logger: Optional[RunLogger] = None,
) -> OptimizerComparison:
    """
    Train eSNN with each optimizer on identical folds and seeds and average the
    per-epoch training and validation curves over splits.

    Validation loss is recorded every ``cfg.eval_every`` epochs (every epoch
    when unset). ``batch_size`` applies to the optimizers that accept
    minibatches; ``optimizer_params`` only to ``cfg.optimizer``.
    """
    if not optimizers:
        raise ConfigError("at least one optimizer is required")
    log = logger or RunLogger("compare-optimizers", ds.name)
    epochs = int(cfg.epochs[0])
    eval_every = cfg.eval_every or 1
    variants: Dict[str, RunConfig] = {}
    for name in optimizers:
        variants[name] = cfg.replace(
            optimizer=name,
            optimizer_params=dict(cfg.optimizer_params) if name == cfg.optimizer else {},
            batch_size=None if name == "rprop" else cfg.batch_size,
            eval_every=eval_every,
        ).validate()
    cells = _variant_cells(ds, variants, epochs, log)
    curves = [OptimizerCurve.from_cell(name, cells[name]) for name in optimizers]
    for curve in curves:
        if curve.cell.ok:
            log.success(f"{curve.optimizer}: mean validation loss {curve.cell.mean:.4f}")
        else:
            log.error(f"{curve.optimizer}: {curve.cell.diagnostic}")
    return OptimizerComparison(dataset=ds.name, epochs=epochs, curves=curves, config=cfg.to_dict())
