"""
CSV ingestion: parse under a schema, impute, min-max scale, one-hot encode.

Order of operations is fixed: imputation (numeric mean, categorical mode),
then min-max scaling of numeric columns over all rows, then one-hot
expansion of categorical attributes.
"""
from __future__ import annotations

import hashlib
import os
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from core.errors import ConfigError, DataError
from data.dataset import AttributeSpec, Dataset, minmax_scale
from data.schema import CATEGORICAL, NUMERIC, Schema, load_schema

WHITESPACE_SEP = r"\s+"


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _read_frame(path: str, schema: Schema) -> pd.DataFrame:
    names = schema.column_names
    kwargs = dict(dtype=str, keep_default_na=False, skip_blank_lines=True, skipinitialspace=True)
    if schema.sep != WHITESPACE_SEP and len(schema.sep) > 1:
        kwargs["engine"] = "python"
    try:
        if schema.header:
            frame = pd.read_csv(path, sep=schema.sep, header=0, **kwargs)
            if frame.shape[1] != len(names):
                raise DataError(
                    f"{os.path.basename(path)}: header has {frame.shape[1]} columns, schema '{schema.name}' has {len(names)}"
                )
            frame.columns = names
        else:
            frame = pd.read_csv(path, sep=schema.sep, header=None, names=names, **kwargs)
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataError(f"{os.path.basename(path)} does not parse: {e}") from None
    # short rows come back as NaN; they count as missing values
    return frame.apply(lambda col: col.str.strip()).fillna("")


def _parse_numeric(frame: pd.DataFrame, name: str, missing: str) -> pd.Series:
    raw = frame[name]
    values = pd.to_numeric(raw.where(~raw.isin([missing, ""])), errors="coerce")
    bad = values.isna() & ~raw.isin([missing, ""])
    if bad.any():
        row = int(raw.index[bad.to_numpy()][0])
        raise DataError(f"column '{name}': cannot parse '{raw.loc[row]}' as a number", row=row)
    return values.astype(np.float64)


def _parse_categorical(frame: pd.DataFrame, name: str, missing: str, categories: Optional[List[str]]) -> Tuple[pd.Series, List[str]]:
    raw = frame[name]
    values = raw.where(~raw.isin([missing, ""]))
    present = values.dropna()
    if categories is not None:
        unknown = ~present.isin(categories)
        if unknown.any():
            row = int(present.index[unknown.to_numpy()][0])
            raise ConfigError(f"row {row}: column '{name}': unknown category '{present[unknown].iloc[0]}'")
        return values, list(categories)
    return values, sorted(present.unique().tolist())


def preprocess_frame(frame: pd.DataFrame, schema: Schema) -> Tuple[np.ndarray, np.ndarray, List[AttributeSpec]]:
    """Return (scaled features, imputed unscaled features, attribute map)."""
    blocks: List[np.ndarray] = []
    attributes: List[AttributeSpec] = []
    numeric_cols: List[int] = []
    width = 0
    for spec in schema.feature_columns:
        if spec.kind == NUMERIC:
            values = _parse_numeric(frame, spec.name, spec.missing_token)
            if values.isna().all():
                raise DataError(f"column '{spec.name}' has no values")
            values = values.fillna(values.mean())
            blocks.append(values.to_numpy(dtype=np.float64).reshape(-1, 1))
            attributes.append(AttributeSpec(name=spec.name, kind=NUMERIC, columns=(width,)))
            numeric_cols.append(width)
            width += 1
        elif spec.kind == CATEGORICAL:
            values, cats = _parse_categorical(frame, spec.name, spec.missing_token, spec.categories)
            if values.notna().any():
                # mode() is sorted, so ties resolve to the smallest category
                values = values.fillna(values.mode().iloc[0])
            else:
                raise DataError(f"column '{spec.name}' has no values")
            dummies = pd.get_dummies(pd.Categorical(values, categories=cats), dtype=np.float64)
            blocks.append(dummies.to_numpy(dtype=np.float64))
            cols = tuple(range(width, width + len(cats)))
            attributes.append(AttributeSpec(name=spec.name, kind=CATEGORICAL, columns=cols, categories=tuple(cats)))
            width += len(cats)
    raw = np.hstack(blocks) if blocks else np.zeros((len(frame), 0))
    scaled = minmax_scale(raw, numeric_cols)
    return scaled, raw, attributes


def load_dataset(csv_path: str, schema: Schema, name: Optional[str] = None) -> Dataset:
    """Read ``csv_path`` under ``schema`` into a preprocessed Dataset."""
    if not os.path.exists(csv_path):
        raise DataError(f"data file not found: {csv_path}")
    frame = _read_frame(csv_path, schema)
    if frame.empty:
        raise DataError(f"{os.path.basename(csv_path)} holds no rows")

    target = frame[schema.target]
    if (target == "").any():
        row = int(np.flatnonzero((target == "").to_numpy())[0])
        raise DataError(f"missing target value in column '{schema.target}'", row=row)
    if schema.drop_classes:
        frame = frame[~target.isin(schema.drop_classes)]
        target = frame[schema.target]

    x, raw, attributes = preprocess_frame(frame, schema)
    classes = sorted(target.unique().tolist())
    if len(classes) < 2:
        raise DataError(f"{os.path.basename(csv_path)}: need at least 2 classes, found {len(classes)}")
    index = {c: i for i, c in enumerate(classes)}
    labels = target.map(index).to_numpy(dtype=np.int64)

    return Dataset(
        x=x,
        labels=labels,
        classes=classes,
        attributes=attributes,
        raw=raw,
        name=name or schema.name or os.path.splitext(os.path.basename(csv_path))[0],
        provenance={
            "file": os.path.basename(csv_path),
            "sha256": file_sha256(csv_path),
            "schema": schema.to_dict(),
        },
    )


def load_dataset_files(csv_path: str, schema_path: str, name: Optional[str] = None) -> Dataset:
    return load_dataset(csv_path, load_schema(schema_path), name=name)
