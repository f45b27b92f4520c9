"""Shared fixtures: fast retries and small synthetic datasets."""

import json

import numpy as np
import pytest

from data.dataset import Dataset


@pytest.fixture(autouse=True)
def fast_sleep(monkeypatch):
    """Mock time.sleep to make retry backoff in tests near-instant."""
    import time as time_module
    original_sleep = time_module.sleep

    def mock_sleep(seconds):
        if seconds > 0.1:
            original_sleep(0.001)
        else:
            original_sleep(seconds)

    monkeypatch.setattr(time_module, 'sleep', mock_sleep)


@pytest.fixture(autouse=True)
def quiet_logs():
    """Keep info lines out of test output; warnings still show."""
    from core.log import set_quiet
    set_quiet(True)
    yield
    set_quiet(False)


def make_blobs(n_per_class=10, n_classes=3, width=4, spread=0.05, seed=0, name="blobs"):
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.2, 0.8, size=(n_classes, width))
    x = np.vstack([c + rng.normal(0.0, spread, size=(n_per_class, width)) for c in centers])
    labels = np.repeat(np.arange(n_classes), n_per_class)
    return Dataset.from_arrays(np.clip(x, 0.0, 1.0), labels, classes=[f"c{i}" for i in range(n_classes)], name=name)


@pytest.fixture
def blobs():
    """30 rows, 3 well separated classes, 4 numeric columns."""
    return make_blobs()


IRIS_SCHEMA = {
    "name": "iris",
    "sep": ",",
    "header": False,
    "target": "species",
    "columns": [
        {"name": "sepal_length", "kind": "numeric"},
        {"name": "sepal_width", "kind": "numeric"},
        {"name": "petal_length", "kind": "numeric"},
        {"name": "petal_width", "kind": "numeric"},
        {"name": "species", "kind": "target"},
    ],
}


def write_iris_like(path, n_per_class=10, seed=0):
    """A small iris-shaped CSV (4 numeric columns, 3 classes)."""
    rng = np.random.default_rng(seed)
    lines = []
    for k, name in enumerate(["Iris-setosa", "Iris-versicolor", "Iris-virginica"]):
        for _ in range(n_per_class):
            values = rng.normal(loc=1.0 + 2.0 * k, scale=0.3, size=4)
            lines.append(",".join(f"{v:.2f}" for v in values) + f",{name}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def data_dir(tmp_path, monkeypatch):
    """A data directory holding an iris-shaped file under the registry's iris entry."""
    d = tmp_path / "data"
    d.mkdir()
    write_iris_like(d / "iris.csv")
    monkeypatch.setenv("SIMBENCH_DATA_DIR", str(d))
    return d


@pytest.fixture
def mixed_files(tmp_path):
    """CSV with numeric, categorical, ignored and missing values, plus its schema file."""
    schema = {
        "name": "mixed",
        "sep": ",",
        "header": False,
        "target": "label",
        "columns": [
            {"name": "id", "kind": "ignore"},
            {"name": "size", "kind": "numeric"},
            {"name": "color", "kind": "categorical", "categories": ["red", "green", "blue"]},
            {"name": "weight", "kind": "numeric"},
            {"name": "label", "kind": "target"},
        ],
    }
    rows = [
        "1,1.0,red,10,a",
        "2,2.0,green,?,a",
        "3,?,blue,30,b",
        "4,4.0,?,40,b",
        "5,5.0,red,50,a",
        "6,3.0,green,20,b",
    ]
    csv_path = tmp_path / "mixed.csv"
    csv_path.write_text("\n".join(rows) + "\n")
    schema_path = tmp_path / "mixed.json"
    schema_path.write_text(json.dumps(schema))
    return csv_path, schema_path
