from __future__ import annotations

import os

import pytest

from core.config import RunConfig, build_config, load_config_file, parse_int_list, resolve_data_dir
from core.errors import ConfigError


def test_defaults_validate():
    cfg = build_config()
    assert cfg.epochs == [200]
    assert cfg.alpha == 0.15
    assert cfg.optimizer == "rprop"
    assert cfg.k == 5 and cfg.repeats == 5
    assert cfg.measures == ["t11", "t21", "gabel", "chopra", "t31", "esnn"]


def test_flags_override_file_values(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("alpha: 0.3\nepochs: [200, 2000]\nseed: 1\nmeasures: esnn,chopra\n")
    file_values = load_config_file(str(path))
    cfg = build_config(file_values, {"seed": 42, "alpha": None})
    assert cfg.alpha == 0.3
    assert cfg.epochs == [200, 2000]
    assert cfg.seed == 42
    assert cfg.measures == ["esnn", "chopra"]


def test_json_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"optimizer": "adam", "optimizer_params": {"lr": 0.01}, "batch_size": 32}')
    cfg = build_config(load_config_file(str(path)))
    assert cfg.optimizer == "adam"
    assert cfg.optimizer_params == {"lr": 0.01}
    assert cfg.batch_size == 32


@pytest.mark.parametrize(
    "values",
    [
        {"alpha": 1.5},
        {"measures": "esnn,knn"},
        {"optimizer": "sgd"},
        {"optimizer": "rprop", "batch_size": 16},
        {"pair_mode": "random"},
        {"k": 1},
        {"epochs": "-1"},
        {"optimizer": "adam", "optimizer_params": {"momentum": 0.9}},
        {"chopra_loss": "hinge"},
        {"hidden": "13,0"},
        {"unknown_key": 1},
        {"seed": "seven"},
    ],
)
def test_invalid_values_are_config_errors(values):
    with pytest.raises(ConfigError):
        build_config(values)


def test_missing_or_bad_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config_file(str(tmp_path / "missing.yaml"))
    bad = tmp_path / "bad.yaml"
    bad.write_text("- just\n- a list\n")
    with pytest.raises(ConfigError):
        load_config_file(str(bad))


def test_parse_int_list():
    assert parse_int_list("200, 2000", "epochs") == [200, 2000]
    assert parse_int_list([1, "2"], "epochs") == [1, 2]
    with pytest.raises(ConfigError):
        parse_int_list("a,b", "epochs")


def test_data_dir_precedence(monkeypatch, tmp_path):
    monkeypatch.delenv("SIMBENCH_DATA_DIR", raising=False)
    assert resolve_data_dir() == os.path.abspath("data_cache")
    monkeypatch.setenv("SIMBENCH_DATA_DIR", str(tmp_path / "env"))
    assert resolve_data_dir() == str(tmp_path / "env")
    assert resolve_data_dir(str(tmp_path / "flag")) == str(tmp_path / "flag")


def test_to_dict_and_replace():
    cfg = build_config({"seed": 3})
    other = cfg.replace(alpha=0.5)
    assert other.alpha == 0.5 and cfg.alpha == 0.15
    assert RunConfig(**cfg.to_dict()).to_dict() == cfg.to_dict()
