from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from core.errors import ConfigError

NUMERIC = "numeric"
CATEGORICAL = "categorical"
TARGET = "target"
IGNORE = "ignore"
COLUMN_KINDS = (NUMERIC, CATEGORICAL, TARGET, IGNORE)


@dataclass
class ColumnSpec:
    name: str
    kind: str
    missing_token: str = "?"
    categories: Optional[List[str]] = None


@dataclass
class Schema:
    """
    Column layout of one CSV source.

    File format (JSON):
        {"name": "...", "sep": ",", "header": false, "target": "class",
         "drop_classes": [], "columns": [{"name", "kind", "missing_token", "categories"}]}

    ``kind`` is numeric, categorical, target or ignore. ``categories`` is
    optional; when given, any other value is rejected at load time.
    """
    columns: List[ColumnSpec]
    target: str
    name: str = ""
    sep: str = ","
    header: bool = False
    drop_classes: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        targets = [c for c in self.columns if c.kind == TARGET]
        if len(targets) != 1:
            raise ConfigError(f"schema '{self.name}' needs exactly one target column, found {len(targets)}")
        if targets[0].name != self.target:
            raise ConfigError(f"schema '{self.name}': target '{self.target}' is not the target column")
        if not self.feature_columns:
            raise ConfigError(f"schema '{self.name}' has no feature columns")
        for c in self.columns:
            if c.kind not in COLUMN_KINDS:
                raise ConfigError(f"schema '{self.name}': column '{c.name}' has unknown kind '{c.kind}'")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ConfigError(f"schema '{self.name}' has duplicate column names")

    @property
    def feature_columns(self) -> List[ColumnSpec]:
        return [c for c in self.columns if c.kind in (NUMERIC, CATEGORICAL)]

    @property
    def column_names(self) -> List[str]:
        return [c.name for c in self.columns]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Schema":
        try:
            columns = [
                ColumnSpec(
                    name=str(c["name"]),
                    kind=str(c.get("kind", NUMERIC)),
                    missing_token=str(c.get("missing_token", "?")),
                    categories=[str(v) for v in c["categories"]] if c.get("categories") is not None else None,
                )
                for c in data["columns"]
            ]
            return cls(
                columns=columns,
                target=str(data["target"]),
                name=str(data.get("name", "")),
                sep=str(data.get("sep", ",")),
                header=bool(data.get("header", False)),
                drop_classes=[str(v) for v in data.get("drop_classes", [])],
            )
        except KeyError as e:
            raise ConfigError(f"schema is missing field {e}") from None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "sep": self.sep,
            "header": self.header,
            "target": self.target,
            "drop_classes": list(self.drop_classes),
            "columns": [
                {k: v for k, v in (
                    ("name", c.name),
                    ("kind", c.kind),
                    ("missing_token", c.missing_token),
                    ("categories", c.categories),
                ) if v is not None}
                for c in self.columns
            ],
        }


def load_schema(path: str) -> Schema:
    if not os.path.exists(path):
        raise ConfigError(f"schema file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"schema file {path} is not valid JSON: {e}") from None
    return Schema.from_dict(data)
