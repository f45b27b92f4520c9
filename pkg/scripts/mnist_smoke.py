"""
Reduced-scale MNIST smoke run: trains eSNN with the MNIST layout on the first
rows of the IDX files and prints the training loss. No retrieval evaluation.

    PYTHONPATH=. python scripts/mnist_smoke.py IMAGES LABELS [ROWS] [EPOCHS]
"""
from __future__ import annotations

import sys

import numpy as np

from core.log import RunLogger
from data.mnist import load_mnist
from measures.esnn import ESNNMeasure
from measures.registry import MNIST_PRESET
from measures.training import train_measure


def main(images: str, labels: str, rows: int = 500, epochs: int = 10) -> int:
    log = RunLogger("mnist")
    ds = load_mnist(images, labels, limit=rows)
    log.info(f"{ds.n_rows} rows of width {ds.n_features}")
    measure = ESNNMeasure(
        MNIST_PRESET["input_width"],
        MNIST_PRESET["n_classes"],
        hidden=MNIST_PRESET["hidden"],
        seed=0,
    )
    _, history = train_measure(
        measure, ds, np.arange(ds.n_rows),
        pair_mode=f"sampled-{ds.n_rows}",
        epochs=epochs, seed=0, logger=log, report_every=1,
    )
    first, last = history.train_loss[0], history.train_loss[-1]
    if not last < first:
        log.error(f"training loss did not decrease: {first:.6f} -> {last:.6f}")
        return 1
    log.success(f"training loss {first:.6f} -> {last:.6f}")
    return 0


if __name__ == "__main__":
    if len(sys.argv) < 3:
        print(__doc__)
        raise SystemExit(1)
    args = sys.argv[1:]
    raise SystemExit(main(args[0], args[1], *(int(a) for a in args[2:4])))
