"""
Pair datasets (x, y, s) with s = 1 iff both rows share a class.

Modes:
    ordered-full      every ordered pair of distinct rows, N(N-1) pairs
    unordered-unique  every unordered pair once (i < j), N(N-1)/2 pairs
    sampled-N         N pairs drawn without replacement from unordered-unique

Self-pairs are never emitted.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Union

import numpy as np

from core.errors import ConfigError, ShapeError
from data.dataset import Dataset

ORDERED_FULL = "ordered-full"
UNORDERED_UNIQUE = "unordered-unique"
SAMPLED = "sampled"


@dataclass(frozen=True)
class PairTriplet:
    x_index: int
    y_index: int
    s: int


@dataclass(frozen=True)
class PairMode:
    kind: str
    count: Optional[int] = None

    @classmethod
    def parse(cls, mode: Union[str, "PairMode"]) -> "PairMode":
        if isinstance(mode, PairMode):
            return mode
        text = str(mode).strip().lower()
        if text in (ORDERED_FULL, UNORDERED_UNIQUE):
            return cls(text)
        if text.startswith(SAMPLED + "-"):
            try:
                count = int(text.split("-", 1)[1])
            except ValueError:
                raise ConfigError(f"bad sample count in pair mode '{mode}'") from None
            if count <= 0:
                raise ConfigError(f"sample count must be positive in pair mode '{mode}'")
            return cls(SAMPLED, count)
        raise ConfigError(f"unknown pair mode '{mode}'")

    def __str__(self) -> str:
        return f"{SAMPLED}-{self.count}" if self.kind == SAMPLED else self.kind


@dataclass
class PairSet:
    """Pairs as parallel arrays of global row ids plus the same-class flag."""
    left: np.ndarray
    right: np.ndarray
    s: np.ndarray

    def __len__(self) -> int:
        return int(self.left.shape[0])

    def __iter__(self) -> Iterator[PairTriplet]:
        for a, b, s in zip(self.left.tolist(), self.right.tolist(), self.s.tolist()):
            yield PairTriplet(int(a), int(b), int(s))

    def triplets(self) -> List[PairTriplet]:
        return list(self)

    def chunks(self, size: int) -> Iterator["PairSet"]:
        for start in range(0, len(self), size):
            stop = start + size
            yield PairSet(self.left[start:stop], self.right[start:stop], self.s[start:stop])


def unordered_count(n: int) -> int:
    return n * (n - 1) // 2


def build_pairs(
    ds: Union[Dataset, Sequence[int]],
    row_ids: Sequence[int],
    mode: Union[str, PairMode],
    seed: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> PairSet:
    """
    Build pairs over ``row_ids`` (global ids into ``ds``).

    ``ds`` may also be a bare label vector. Sampling uses ``rng`` when given,
    else a generator seeded with ``seed``.
    """
    labels = ds.labels if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.int64)
    ids = np.asarray(row_ids, dtype=np.int64)
    if ids.ndim != 1:
        raise ShapeError("row ids must be a flat sequence")
    mode = PairMode.parse(mode)
    n = ids.shape[0]

    if mode.kind == ORDERED_FULL:
        a, b = np.nonzero(~np.eye(n, dtype=bool))
    else:
        a, b = np.triu_indices(n, k=1)
        if mode.kind == SAMPLED:
            population = a.shape[0]
            if mode.count > population:
                raise ConfigError(
                    f"cannot sample {mode.count} pairs from {population} unordered pairs of {n} rows"
                )
            gen = rng if rng is not None else np.random.default_rng(seed)
            pick = np.sort(gen.choice(population, size=mode.count, replace=False))
            a, b = a[pick], b[pick]

    left, right = ids[a], ids[b]
    s = (labels[left] == labels[right]).astype(np.int64)
    return PairSet(left=left, right=right, s=s)
