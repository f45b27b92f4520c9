from __future__ import annotations

import pytest

from core.errors import (
    CacheError,
    ConfigError,
    DataError,
    InvalidLayoutError,
    NotTrainedError,
    ProjectionError,
    ProtocolError,
    ShapeError,
    SimbenchError,
    StratificationError,
)


@pytest.mark.parametrize(
    "error, bases",
    [
        (ConfigError("x"), (SimbenchError, ValueError)),
        (InvalidLayoutError("x"), (ConfigError,)),
        (ShapeError("x"), (SimbenchError, ValueError)),
        (CacheError("x"), (SimbenchError, RuntimeError)),
        (NotTrainedError("x"), (SimbenchError, RuntimeError)),
        (ProtocolError("x"), (SimbenchError, RuntimeError)),
        (ProjectionError("x"), (SimbenchError, ValueError)),
        (StratificationError("rare", 2, 5), (DataError,)),
    ],
)
def test_hierarchy(error, bases):
    for base in bases:
        assert isinstance(error, base)


def test_data_error_carries_row():
    err = DataError("cannot parse 'abc'", row=6)
    assert err.row == 6
    assert str(err) == "row 6: cannot parse 'abc'"
    assert DataError("missing").row is None


def test_stratification_error_names_the_class():
    err = StratificationError("rare", 2, 5)
    assert "'rare'" in str(err)
    assert (err.class_name, err.count, err.k) == ("rare", 2, 5)
