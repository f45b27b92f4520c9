from __future__ import annotations

import numpy as np
import pytest

from core.errors import ConfigError
from data.pairs import PairMode, build_pairs, unordered_count


def test_pair_counts_exhaustive():
    for n in range(0, 101):
        labels = np.arange(n) % 3
        ids = np.arange(n)
        assert len(build_pairs(labels, ids, "ordered-full")) == n * (n - 1)
        assert len(build_pairs(labels, ids, "unordered-unique")) == unordered_count(n) == n * (n - 1) // 2


def test_pairs_never_include_self_and_flag_same_class():
    labels = np.array([0, 0, 1, 1, 2])
    ids = np.array([4, 0, 2, 1, 3])
    for mode in ("ordered-full", "unordered-unique", "sampled-6"):
        pairs = build_pairs(labels, ids, mode, seed=0)
        assert np.all(pairs.left != pairs.right)
        assert np.array_equal(pairs.s, (labels[pairs.left] == labels[pairs.right]).astype(int))
        for t in pairs:
            assert t.s in (0, 1)


def test_ordered_full_contains_both_orders():
    pairs = build_pairs(np.array([0, 1, 0]), [0, 1, 2], "ordered-full")
    as_set = {(t.x_index, t.y_index) for t in pairs}
    assert (0, 1) in as_set and (1, 0) in as_set


def test_sampled_is_seeded_and_unique():
    labels = np.arange(20) % 2
    a = build_pairs(labels, np.arange(20), "sampled-50", seed=3)
    b = build_pairs(labels, np.arange(20), "sampled-50", seed=3)
    assert np.array_equal(a.left, b.left) and np.array_equal(a.right, b.right)
    assert len({(l, r) for l, r in zip(a.left.tolist(), a.right.tolist())}) == 50


def test_sampled_count_cannot_exceed_population():
    with pytest.raises(ConfigError):
        build_pairs(np.array([0, 1, 0]), [0, 1, 2], "sampled-4", seed=0)


@pytest.mark.parametrize("text", ["everything", "sampled-x", "sampled-0"])
def test_bad_pair_modes(text):
    with pytest.raises(ConfigError):
        PairMode.parse(text)


def test_pair_mode_text_roundtrip():
    assert str(PairMode.parse("Sampled-12")) == "sampled-12"
    assert str(PairMode.parse("ordered-full")) == "ordered-full"


def test_chunks_cover_all_pairs():
    pairs = build_pairs(np.arange(7) % 2, np.arange(7), "unordered-unique")
    chunks = list(pairs.chunks(5))
    assert sum(len(c) for c in chunks) == len(pairs) == 21
    assert np.array_equal(np.concatenate([c.left for c in chunks]), pairs.left)
