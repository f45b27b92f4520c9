"""
simbench command line.

    python -m cli.main [--config FILE] [--data-dir DIR] [--jobs N] [--quiet] COMMAND [OPTIONS]

Settings resolve as built-in defaults < --config file (YAML or JSON) < flags.
Exit codes: 0 success, 1 configuration or usage error, 2 data error,
3 any other failure. Errors are reported as one line on stderr.
"""
from __future__ import annotations

import os
from typing import Any, Callable, Dict, Optional, Sequence

import click

from core.artifact_store import ArtifactStore
from core.config import RunConfig, build_config, load_config_file
from core.dataset_registry import DatasetRegistry
from core.errors import ConfigError, DataError
from core.log import RunLogger, set_quiet
from data.dataset import Dataset
from data.fetch import fetch_all, load_registered
from evaluation.benchmark import SplitTask, derive_seed, folds_for, run_benchmark, save_report, split_data, train_split
from evaluation.embeddings import embedding_comparison
from evaluation.report import render_table
from evaluation.retrieval import retrieval_loss
from evaluation.sweeps import alpha_grid, alpha_sweep, compare_optimizers
from measures.base import check_requirements
from measures.serialization import measure_from_document, measure_to_document

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3

CURVE_COLUMNS = ("epoch", "train_loss", "val_retrieval_loss")


def _parse_optimizer_params(values: Sequence[str]) -> Optional[Dict[str, float]]:
    if not values:
        return None
    params: Dict[str, float] = {}
    for item in values:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--optimizer-param expects KEY=VALUE, got '{item}'")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"--optimizer-param {key}: '{value}' is not a number") from None
    return params


def run_options(func: Callable) -> Callable:
    """Flags shared by every command that trains or evaluates measures."""
    options = [
        click.option("--measures", help="Comma-separated measures: t11,t21,gabel,chopra,t31,esnn."),
        click.option("--epochs", help="Comma-separated epoch budgets, e.g. 200,2000."),
        click.option("--alpha", type=float, help="eSNN weight of the similarity term, in [0, 1]."),
        click.option("--optimizer", help="rprop (full batch), adam or rmsprop."),
        click.option("--optimizer-param", "optimizer_param", multiple=True, help="Optimizer hyperparameter KEY=VALUE (repeatable)."),
        click.option("--batch-size", type=int, help="Minibatch size (adam/rmsprop only)."),
        click.option("--pair-mode", help="auto, ordered-full, unordered-unique or sampled-N."),
        click.option("--resample-pairs/--fixed-pairs", default=None, help="Redraw sampled pairs every epoch."),
        click.option("--k", "k", type=int, help="Folds per repeat."),
        click.option("--repeats", type=int, help="Cross-validation repeats."),
        click.option("--seed", type=int, help="Master seed."),
        click.option("--output-dir", help="Directory for reports and models."),
        click.option("--strict-normalization/--global-normalization", default=None, help="Re-scale numeric columns per fold."),
        click.option("--eval-every", type=int, help="Record validation retrieval loss every N epochs."),
        click.option("--report-every", type=int, help="Log training loss every N epochs."),
        click.option("--chopra-loss", help="contrastive or energy."),
        click.option("--margin", type=float, help="Contrastive loss margin."),
        click.option("--energy-q", type=float, help="Energy loss bound Q."),
        click.option("--hidden", help="Comma-separated hidden layer widths, e.g. 13,13."),
        click.option("--pair-chunk", type=int, help="Pairs per gradient chunk."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _config(ctx: click.Context, command: str, flags: Dict[str, Any]) -> RunConfig:
    flags = dict(flags)
    flags["optimizer_params"] = _parse_optimizer_params(flags.pop("optimizer_param", ()) or ())
    flags["command"] = command
    flags["data_dir"] = ctx.obj.get("data_dir")
    flags["jobs"] = ctx.obj.get("jobs")
    file_values = ctx.obj.get("file_values") or {}
    return build_config(file_values, flags)


def _single_dataset(cfg: RunConfig, registry: DatasetRegistry) -> Dataset:
    entries = registry.resolve(cfg.datasets)
    if len(entries) != 1:
        raise ConfigError(f"this command takes exactly one dataset, got '{cfg.datasets}'")
    return load_registered(entries[0].key, cfg.data_dir, registry)


def _single_measure(cfg: RunConfig, default: str) -> str:
    if len(cfg.measures) == 1:
        return cfg.measures[0]
    if default in cfg.measures:
        return default
    raise ConfigError("this command takes exactly one measure; pass --measure")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="YAML or JSON config file.")
@click.option("--data-dir", help="Dataset directory (default: $SIMBENCH_DATA_DIR or ./data_cache).")
@click.option("--jobs", type=int, help="Worker processes for benchmark splits (default: all cores).")
@click.option("--quiet", is_flag=True, help="Only print warnings and errors.")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], data_dir: Optional[str], jobs: Optional[int], quiet: bool) -> None:
    """Benchmark learned and modeled similarity measures on tabular datasets."""
    set_quiet(quiet)
    ctx.ensure_object(dict)
    ctx.obj["file_values"] = load_config_file(config_path) if config_path else {}
    ctx.obj["data_dir"] = data_dir
    ctx.obj["jobs"] = jobs


@cli.command()
@click.option("--datasets", default=None, help="'all' or comma-separated dataset keys.")
@click.option("--offline", is_flag=True, default=None, help="Only verify files already in the data directory.")
@click.pass_context
def fetch(ctx: click.Context, datasets: Optional[str], offline: Optional[bool]) -> None:
    """Download datasets and verify their SHA-256 digests."""
    cfg = _config(ctx, "fetch", {"datasets": datasets, "offline": offline})
    registry = DatasetRegistry()
    entries = registry.resolve(cfg.datasets)
    failures = fetch_all(entries, cfg.data_dir, offline=cfg.offline)
    if failures:
        raise DataError(f"{len(failures)} of {len(entries)} dataset(s) failed: {', '.join(sorted(failures))}")
    RunLogger("fetch").success(f"{len(entries)} dataset(s) ready in {cfg.data_dir}")


@cli.command()
@click.option("--dataset", "datasets", default=None, help="Dataset key.")
@click.option("--measure", "measure_name", default=None, help="Measure to train.")
@click.option("--split", "split_index", type=int, default=0, show_default=True, help="Cross-validation split to train on.")
@click.option("--curve", is_flag=True, help="Write the per-epoch training/validation curve as CSV.")
@click.option("--model-out", default=None, help="Model JSON path (default: <output-dir>/model_<dataset>_<measure>.json).")
@run_options
@click.pass_context
def train(ctx: click.Context, datasets, measure_name, split_index, curve, model_out, **flags) -> None:
    """Train one measure on one split and save it as JSON."""
    if curve and not flags.get("eval_every"):
        flags["eval_every"] = 1
    if measure_name:
        flags["measures"] = measure_name
    cfg = _config(ctx, "train", dict(flags, datasets=datasets))
    registry = DatasetRegistry()
    ds = _single_dataset(cfg, registry)
    name = _single_measure(cfg, "esnn")
    epochs = int(cfg.epochs[0])
    log = RunLogger("train", ds.name, name)

    splits = folds_for(ds, cfg)
    if not 0 <= split_index < len(splits):
        raise ConfigError(f"--split {split_index} out of range (0..{len(splits) - 1})")
    split = splits[split_index]
    seed = derive_seed(cfg.seed, ds.name, name, split.index, epochs)
    measure, data, history = train_split(ds, SplitTask(ds.name, name, epochs, split, seed, cfg), logger=log)
    loss = retrieval_loss(measure, data, split.train_ids, split.val_ids)

    store = ArtifactStore(cfg.output_dir)
    doc = measure_to_document(
        measure,
        config=cfg.to_dict(),
        extra={"dataset": ds.name, "split": split.index, "retrieval_loss": loss, "history": history.to_dict()},
    )
    path = os.path.abspath(model_out) if model_out else store.path(f"model_{ds.name}_{name}.json")
    ArtifactStore(os.path.dirname(path)).save_json(os.path.basename(path), doc)
    log.success(f"model saved to {path}")
    if curve:
        curve_path = store.save_csv(f"curve_{ds.name}_{name}.csv", history.curve_rows(), CURVE_COLUMNS)
        log.success(f"curve saved to {curve_path}")
    click.echo(f"{ds.name}\t{name}\tsplit={split.index}\tretrieval_loss={loss!r}")


@cli.command(name="eval")
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False), help="Model JSON written by `train`.")
@click.option("--dataset", "datasets", default=None, help="Dataset key (default: the one the model was trained on).")
@click.option("--split", "split_index", type=int, default=None, help="Split to evaluate (default: the training split).")
@click.option("--check", is_flag=True, help="Also check symmetry, identity and non-negativity on sampled pairs.")
@click.pass_context
def eval_command(ctx: click.Context, model_path, datasets, split_index, check) -> None:
    """Validation retrieval loss of a saved model."""
    if not os.path.exists(model_path):
        raise DataError(f"model file not found: {model_path}")
    store = ArtifactStore(os.path.dirname(os.path.abspath(model_path)))
    doc = store.load_json(os.path.basename(model_path))
    measure = measure_from_document(doc)
    saved = dict(doc.get("config") or {})
    # the model's own folds: same k, repeats, seed and normalization as at training time
    file_values = {k: saved[k] for k in ("k", "repeats", "seed", "strict_normalization") if k in saved}
    file_values.update(ctx.obj.get("file_values") or {})
    ctx.obj["file_values"] = file_values
    cfg = _config(ctx, "eval", {"datasets": datasets or doc.get("dataset")})
    registry = DatasetRegistry()
    ds = _single_dataset(cfg, registry)
    splits = folds_for(ds, cfg)
    index = int(doc.get("split", 0)) if split_index is None else split_index
    if not 0 <= index < len(splits):
        raise ConfigError(f"--split {index} out of range (0..{len(splits) - 1})")
    split = splits[index]
    data = split_data(ds, split, cfg)
    if not measure.learned:
        measure.prepare(data.x[split.train_ids], data.labels[split.train_ids])
    loss = retrieval_loss(measure, data, split.train_ids, split.val_ids)
    click.echo(f"{ds.name}\t{measure.name}\tsplit={split.index}\tretrieval_loss={loss!r}")
    if check:
        report = check_requirements(measure, data.x, seed=cfg.seed)
        for key, value in sorted(report.to_dict().items()):
            click.echo(f"{key}\t{value}")


@cli.command()
@click.option("--datasets", default=None, help="'all' or comma-separated dataset keys.")
@run_options
@click.pass_context
def benchmark(ctx: click.Context, datasets, **flags) -> None:
    """Cross-validated retrieval loss for every dataset x measure x epoch budget."""
    cfg = _config(ctx, "benchmark", dict(flags, datasets=datasets))
    report = run_benchmark(cfg)
    paths = save_report(report, ArtifactStore(cfg.output_dir))
    for epochs in report.epoch_budgets:
        click.echo(render_table(report, epochs))
    RunLogger("benchmark").success(f"wrote {', '.join(paths)}")


@cli.command(name="sweep-alpha")
@click.option("--dataset", "datasets", default=None, help="Dataset key.")
@click.option("--grid", "grid_points", type=int, default=None, help="Number of evenly spaced alpha values in [0, 1] (default 21).")
@click.option("--alpha-grid", "grid_values", default=None, help="Explicit comma-separated alpha values.")
@run_options
@click.pass_context
def sweep_alpha(ctx: click.Context, datasets, grid_points, grid_values, **flags) -> None:
    """Mean eSNN retrieval loss for a grid of alpha values."""
    flags.pop("alpha", None)
    cfg = _config(ctx, "sweep-alpha", dict(flags, datasets=datasets, alpha_grid=grid_values))
    if grid_points is not None:
        cfg = cfg.replace(alpha_grid=alpha_grid(grid_points, cfg.alpha))
    elif not cfg.alpha_grid:
        cfg = cfg.replace(alpha_grid=alpha_grid(21))
    ds = _single_dataset(cfg, DatasetRegistry())
    result = alpha_sweep(ds, cfg.alpha_grid, cfg)
    store = ArtifactStore(cfg.output_dir)
    store.save_csv(f"alpha_sweep_{ds.name}.csv", result.curve_rows(), ("alpha", "mean_loss", "std_loss", "status"))
    path = store.save_json(f"alpha_sweep_{ds.name}.json", result.to_dict())
    best = result.best
    click.echo(f"{ds.name}\tbest_alpha={best.alpha if best else None}\tmean_loss={best.cell.mean if best else None}")
    RunLogger("sweep-alpha").success(f"wrote {path}")


@cli.command(name="compare-optimizers")
@click.option("--dataset", "datasets", default=None, help="Dataset key.")
@click.option("--optimizers", default=None, help="Comma-separated optimizers (default: rprop,adam,rmsprop).")
@run_options
@click.pass_context
def compare_optimizers_command(ctx: click.Context, datasets, optimizers, **flags) -> None:
    """eSNN training and validation curves per optimizer on identical splits."""
    cfg = _config(ctx, "compare-optimizers", dict(flags, datasets=datasets, optimizers=optimizers))
    ds = _single_dataset(cfg, DatasetRegistry())
    result = compare_optimizers(ds, cfg.optimizers, cfg)
    store = ArtifactStore(cfg.output_dir)
    store.save_csv(
        f"optimizer_curves_{ds.name}.csv",
        result.curve_rows(),
        ("optimizer", "epoch", "train_loss", "val_retrieval_loss"),
    )
    path = store.save_json(f"optimizer_comparison_{ds.name}.json", result.to_dict())
    for row in result.summary_rows():
        click.echo(f"{row['optimizer']}\t{row['status']}\tmean_loss={row['mean_loss']}\tstd_loss={row['std_loss']}")
    RunLogger("compare-optimizers").success(f"wrote {path}")


@cli.command(name="export-embeddings")
@click.option("--dataset", "datasets", default=None, help="Dataset key.")
@click.option("--measure", "measure_name", default="esnn", show_default=True, help="Measure with a learned embedding (esnn, chopra, t31).")
@click.option("--split", "split_index", type=int, default=0, show_default=True, help="Split whose validation rows are embedded.")
@run_options
@click.pass_context
def export_embeddings_command(ctx: click.Context, datasets, measure_name, split_index, **flags) -> None:
    """Embeddings, 2-D PCA coordinates and silhouette before and after training."""
    cfg = _config(ctx, "export-embeddings", dict(flags, datasets=datasets, measures=measure_name))
    ds = _single_dataset(cfg, DatasetRegistry())
    before, after = embedding_comparison(ds, cfg, measure_name=measure_name, split_index=split_index)
    store = ArtifactStore(cfg.output_dir)
    stem = f"embeddings_{ds.name}_{measure_name}"
    store.save_csv(f"{stem}_untrained.csv", before.rows(), before.columns)
    store.save_csv(f"{stem}_trained.csv", after.rows(), after.columns)
    path = store.save_json(f"{stem}.json", {
        "dataset": ds.name,
        "measure": measure_name,
        "split": split_index,
        "untrained": before.summary(),
        "trained": after.summary(),
        "config": cfg.to_dict(),
    })
    click.echo(f"{ds.name}\t{measure_name}\tsilhouette_untrained={before.silhouette}\tsilhouette_trained={after.silhouette}")
    RunLogger("export-embeddings").success(f"wrote {path}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name="simbench", standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        return EXIT_CONFIG
    except click.exceptions.Abort:
        click.echo("✗ aborted", err=True)
        return EXIT_CONFIG
    except ConfigError as e:
        click.echo(f"✗ config error: {e}", err=True)
        return EXIT_CONFIG
    except DataError as e:
        click.echo(f"✗ data error: {e}", err=True)
        return EXIT_DATA
    except click.exceptions.ClickException as e:
        click.echo(f"✗ {e.format_message()}", err=True)
        return EXIT_CONFIG
    except Exception as e:
        click.echo(f"✗ {type(e).__name__}: {e}", err=True)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
