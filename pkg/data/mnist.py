"""IDX reader for MNIST-style files, returned as flat [0, 1] vectors."""
from __future__ import annotations

import gzip
import os
import struct
from typing import Optional

import numpy as np

from core.errors import DataError
from data.dataset import Dataset

_IDX_TYPES = {
    0x08: np.uint8,
    0x09: np.int8,
    0x0B: np.dtype(">i2"),
    0x0C: np.dtype(">i4"),
    0x0D: np.dtype(">f4"),
    0x0E: np.dtype(">f8"),
}


def read_idx(path: str) -> np.ndarray:
    if not os.path.exists(path):
        raise DataError(f"IDX file not found: {path}")
    opener = gzip.open if path.endswith(".gz") else open
    try:
        with opener(path, "rb") as f:
            content = f.read()
    except (OSError, EOFError) as e:
        raise DataError(f"{path}: cannot read IDX file ({e})") from e
    if len(content) < 4:
        raise DataError(f"{path}: truncated IDX header")
    zero, type_code, ndim = struct.unpack(">HBB", content[:4])
    if zero != 0 or type_code not in _IDX_TYPES:
        raise DataError(f"{path}: not an IDX file")
    header_end = 4 + 4 * ndim
    if len(content) < header_end:
        raise DataError(f"{path}: truncated IDX header, {ndim} dimension(s) need {header_end} bytes")
    shape = struct.unpack(f">{ndim}I", content[4:header_end])
    dtype = np.dtype(_IDX_TYPES[type_code])
    expected = int(np.prod(shape)) * dtype.itemsize
    if len(content) - header_end != expected:
        raise DataError(f"{path}: payload is {len(content) - header_end} bytes, header promises {expected}")
    return np.frombuffer(content, dtype=dtype, offset=header_end).reshape(shape)


def load_mnist(images_path: str, labels_path: str, limit: Optional[int] = None) -> Dataset:
    images = read_idx(images_path)
    labels = read_idx(labels_path).astype(np.int64)
    if images.shape[0] != labels.shape[0]:
        raise DataError(f"{images.shape[0]} images but {labels.shape[0]} labels")
    if limit is not None:
        images, labels = images[:limit], labels[:limit]
    x = images.reshape(images.shape[0], -1).astype(np.float64) / 255.0
    return Dataset.from_arrays(x, labels, classes=[str(d) for d in range(10)], name="mnist")
