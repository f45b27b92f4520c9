"""
Offline end-to-end run on synthetic data: every measure, a small benchmark,
an alpha sweep, the optimizer comparison and an embedding export.

    PYTHONPATH=. python scripts/dry_run.py [output_dir]
"""
from __future__ import annotations

import sys

import numpy as np

from core.artifact_store import ArtifactStore
from core.config import RunConfig
from data.dataset import Dataset
from evaluation.benchmark import run_benchmark, save_report
from evaluation.embeddings import embedding_comparison
from evaluation.report import render_table
from evaluation.sweeps import alpha_sweep, compare_optimizers


def synthetic_blobs(n_per_class: int = 20, n_classes: int = 3, width: int = 4, seed: int = 0) -> Dataset:
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.2, 0.8, size=(n_classes, width))
    x = np.vstack([c + rng.normal(0.0, 0.05, size=(n_per_class, width)) for c in centers])
    labels = np.repeat(np.arange(n_classes), n_per_class)
    return Dataset.from_arrays(np.clip(x, 0.0, 1.0), labels, classes=[f"c{i}" for i in range(n_classes)], name="blobs")


def run_benchmark_demo(ds: Dataset, cfg: RunConfig, store: ArtifactStore) -> None:
    report = run_benchmark(cfg, datasets={ds.name: ds})
    save_report(report, store)
    print(render_table(report, cfg.epochs[0]))


def run_alpha_demo(ds: Dataset, cfg: RunConfig, store: ArtifactStore) -> None:
    result = alpha_sweep(ds, [0.0, 0.15, 1.0], cfg)
    store.save_json("dry_run_alpha_sweep.json", result.to_dict())
    for row in result.curve_rows():
        print(f"alpha={row['alpha']:.2f} mean_loss={row['mean_loss']}")


def run_optimizer_demo(ds: Dataset, cfg: RunConfig, store: ArtifactStore) -> None:
    result = compare_optimizers(ds, ["rprop", "adam", "rmsprop"], cfg.replace(eval_every=5))
    store.save_json("dry_run_optimizers.json", result.to_dict())
    for row in result.summary_rows():
        print(f"{row['optimizer']}: mean_loss={row['mean_loss']}")


def run_embedding_demo(ds: Dataset, cfg: RunConfig) -> None:
    before, after = embedding_comparison(ds, cfg)
    print(f"silhouette untrained={before.silhouette} trained={after.silhouette}")


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/dry_run"
    ds = synthetic_blobs()
    cfg = RunConfig(command="dry-run", epochs=[20], k=3, repeats=1, jobs=1, output_dir=out).validate()
    store = ArtifactStore(out)
    print("-- benchmark --")
    run_benchmark_demo(ds, cfg, store)
    print("-- alpha sweep --")
    run_alpha_demo(ds, cfg, store)
    print("-- optimizers --")
    run_optimizer_demo(ds, cfg, store)
    print("-- embeddings --")
    run_embedding_demo(ds, cfg)
    print("Done.")
