"""
Run configuration.

Values come from three layers, later layers winning:

    built-in defaults < config file (--config, YAML or JSON) < command-line flags

The resolved RunConfig is validated before any work starts and embedded
verbatim (``to_dict()``) into every artifact a run writes.
"""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Mapping, Optional

import yaml

from core.errors import ConfigError

DATA_DIR_ENV = "SIMBENCH_DATA_DIR"
DEFAULT_DATA_DIR = "data_cache"

MEASURE_NAMES = ("t11", "t21", "gabel", "chopra", "t31", "esnn")
OPTIMIZER_NAMES = ("rprop", "adam", "rmsprop")
CHOPRA_LOSSES = ("contrastive", "energy")


def _default_jobs() -> int:
    return max(1, os.cpu_count() or 1)


@dataclass
class RunConfig:
    command: str = "benchmark"
    datasets: str = "all"
    measures: List[str] = field(default_factory=lambda: list(MEASURE_NAMES))
    epochs: List[int] = field(default_factory=lambda: [200])
    alpha: float = 0.15
    optimizer: str = "rprop"
    optimizer_params: Dict[str, float] = field(default_factory=dict)
    batch_size: Optional[int] = None  # None = full batch
    pair_mode: str = "auto"  # auto | ordered-full | unordered-unique | sampled-N
    resample_pairs: bool = True  # sampled-N only: redraw every epoch
    k: int = 5
    repeats: int = 5
    seed: int = 7
    output_dir: str = "results"
    strict_normalization: bool = False
    jobs: int = field(default_factory=_default_jobs)
    eval_every: int = 0
    data_dir: Optional[str] = None
    chopra_loss: str = "contrastive"
    margin: float = 1.0
    energy_q: float = 1.0
    hidden: List[int] = field(default_factory=lambda: [13, 13])
    report_every: int = 0
    offline: bool = False
    alpha_grid: List[float] = field(default_factory=list)
    optimizers: List[str] = field(default_factory=lambda: list(OPTIMIZER_NAMES))
    pair_chunk: int = 65536

    def validate(self) -> "RunConfig":
        if not self.datasets or not str(self.datasets).strip():
            raise ConfigError("datasets: at least one dataset is required")
        if not self.measures:
            raise ConfigError("measures: at least one measure is required")
        for m in self.measures:
            if m not in MEASURE_NAMES:
                raise ConfigError(f"measures: unknown measure '{m}' (known: {', '.join(MEASURE_NAMES)})")
        if not self.epochs:
            raise ConfigError("epochs: at least one epoch budget is required")
        for e in self.epochs:
            if int(e) < 0:
                raise ConfigError(f"epochs: must be non-negative, got {e}")
        if not (0.0 <= float(self.alpha) <= 1.0):
            raise ConfigError(f"alpha must be within [0, 1], got {self.alpha}")
        for a in self.alpha_grid:
            if not (0.0 <= float(a) <= 1.0):
                raise ConfigError(f"alpha_grid: value {a} outside [0, 1]")
        if self.optimizer not in OPTIMIZER_NAMES:
            raise ConfigError(f"optimizer: unknown '{self.optimizer}' (known: {', '.join(OPTIMIZER_NAMES)})")
        for o in self.optimizers:
            if o not in OPTIMIZER_NAMES:
                raise ConfigError(f"optimizers: unknown '{o}'")
        if self.batch_size is not None:
            if int(self.batch_size) <= 0:
                raise ConfigError("batch_size must be positive")
            if self.optimizer == "rprop":
                raise ConfigError("rprop requires full-batch gradients; unset batch_size or pick adam/rmsprop")
        if self.pair_mode != "auto":
            from data.pairs import PairMode

            PairMode.parse(self.pair_mode)
        if self.k < 2:
            raise ConfigError(f"k must be at least 2, got {self.k}")
        if self.repeats < 1:
            raise ConfigError(f"repeats must be at least 1, got {self.repeats}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {self.jobs}")
        if self.eval_every < 0 or self.report_every < 0:
            raise ConfigError("eval_every and report_every must be non-negative")
        if self.chopra_loss not in CHOPRA_LOSSES:
            raise ConfigError(f"chopra_loss: unknown '{self.chopra_loss}' (known: {', '.join(CHOPRA_LOSSES)})")
        if self.margin <= 0 or self.energy_q <= 0:
            raise ConfigError("margin and energy_q must be positive")
        if not self.hidden or any(int(h) <= 0 for h in self.hidden):
            raise ConfigError("hidden: layer widths must be positive")
        if self.pair_chunk <= 0:
            raise ConfigError("pair_chunk must be positive")
        from optim import check_optimizer_params

        check_optimizer_params(self.optimizer, self.optimizer_params)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def replace(self, **changes: Any) -> "RunConfig":
        data = self.to_dict()
        data.update(changes)
        return RunConfig(**data)


def parse_int_list(value: Any, name: str) -> List[int]:
    if isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [p for p in str(value).split(",") if p.strip()]
    try:
        return [int(str(v).strip()) for v in items]
    except ValueError:
        raise ConfigError(f"{name}: expected comma-separated integers, got '{value}'") from None


def parse_float_list(value: Any, name: str) -> List[float]:
    if isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [p for p in str(value).split(",") if p.strip()]
    try:
        return [float(str(v).strip()) for v in items]
    except ValueError:
        raise ConfigError(f"{name}: expected comma-separated numbers, got '{value}'") from None


def parse_name_list(value: Any) -> List[str]:
    if isinstance(value, (list, tuple)):
        return [str(v).strip().lower() for v in value if str(v).strip()]
    return [p.strip().lower() for p in str(value).split(",") if p.strip()]


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a YAML or JSON config file (JSON is valid YAML)."""
    if not os.path.exists(path):
        raise ConfigError(f"Config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Config file {path} does not parse: {e}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a mapping at top level")
    return data


_LIST_FIELDS = {
    "measures": parse_name_list,
    "optimizers": parse_name_list,
    "epochs": lambda v: parse_int_list(v, "epochs"),
    "hidden": lambda v: parse_int_list(v, "hidden"),
    "alpha_grid": lambda v: parse_float_list(v, "alpha_grid"),
}


def _coerce(values: Mapping[str, Any]) -> Dict[str, Any]:
    known = {f.name for f in fields(RunConfig)}
    out: Dict[str, Any] = {}
    for key, value in values.items():
        key = str(key).replace("-", "_")
        if key not in known:
            raise ConfigError(f"Unknown config key '{key}'")
        if value is None and key not in ("batch_size", "data_dir"):
            continue
        if key in _LIST_FIELDS:
            value = _LIST_FIELDS[key](value)
        out[key] = value
    return out


def build_config(
    file_values: Optional[Mapping[str, Any]] = None,
    flag_values: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Merge defaults < file < flags into a validated RunConfig."""
    merged: Dict[str, Any] = {}
    merged.update(_coerce(file_values or {}))
    # flags left unset by the user arrive as None and must not mask file values
    merged.update(_coerce({k: v for k, v in (flag_values or {}).items() if v is not None}))
    try:
        cfg = RunConfig(**merged)
        cfg.alpha = float(cfg.alpha)
        cfg.margin = float(cfg.margin)
        cfg.energy_q = float(cfg.energy_q)
        cfg.k = int(cfg.k)
        cfg.repeats = int(cfg.repeats)
        cfg.seed = int(cfg.seed)
        cfg.jobs = int(cfg.jobs)
        cfg.eval_every = int(cfg.eval_every)
        cfg.report_every = int(cfg.report_every)
        cfg.pair_chunk = int(cfg.pair_chunk)
        if cfg.batch_size is not None:
            cfg.batch_size = int(cfg.batch_size)
        cfg.optimizer = str(cfg.optimizer).lower()
        cfg.optimizer_params = {str(k): float(v) for k, v in dict(cfg.optimizer_params).items()}
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid config value: {e}") from None
    cfg.data_dir = resolve_data_dir(cfg.data_dir)
    return cfg.validate()


def resolve_data_dir(flag_value: Optional[str] = None) -> str:
    """--data-dir flag, else $SIMBENCH_DATA_DIR, else ./data_cache."""
    if flag_value:
        return os.path.abspath(flag_value)
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return os.path.abspath(env)
    return os.path.abspath(DEFAULT_DATA_DIR)
