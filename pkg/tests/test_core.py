import numpy as np
import pytest

from divcast.core import (
    FREQUENCIES,
    ForecastResult,
    TimeSeries,
    get_frequency,
    join,
    split,
    stack_results,
)
from divcast.errors import LengthMismatch, SeriesTooShort

from conftest import make_ts


def test_frequency_table():
    expected = {
        "yearly": (1, 6),
        "quarterly": (4, 8),
        "monthly": (12, 18),
        "weekly": (1, 13),
        "daily": (1, 14),
        "hourly": (24, 48),
    }
    assert set(FREQUENCIES) == set(expected)
    for label, (m, h) in expected.items():
        freq = get_frequency(label)
        assert freq.period == m
        assert freq.default_horizon == h


def test_get_frequency_unknown():
    with pytest.raises(ValueError):
        get_frequency("fortnightly")


def test_default_horizon_applied():
    ts = make_ts([1, 2, 3], "monthly")
    assert ts.horizon == 18
    ts2 = make_ts([1, 2, 3], "monthly", horizon=4)
    assert ts2.horizon == 4


def test_series_rejects_non_finite():
    with pytest.raises(ValueError):
        make_ts([1.0, np.nan, 3.0])


def test_split_suffix():
    ts = make_ts(list(range(1, 11)), "yearly", horizon=2)
    parts = split(ts)
    assert list(parts.train.values) == list(range(1, 9))
    assert list(parts.test_actuals) == [9, 10]


def test_split_minimum_yearly_length():
    # length 13 with the default yearly horizon 6 leaves 7 training points
    ts = make_ts(list(range(13)), "yearly")
    parts = split(ts)
    assert len(parts.train) == 7
    assert parts.test_actuals.shape[0] == 6


def test_split_too_short():
    ts = make_ts(list(range(7)), "yearly")  # T == H + m
    with pytest.raises(SeriesTooShort):
        split(ts)


def test_join_round_trip():
    ts = make_ts(np.linspace(3.0, 9.0, 25), "quarterly")
    rebuilt = join(split(ts))
    assert rebuilt.id == ts.id
    assert np.array_equal(rebuilt.values, ts.values)
    assert rebuilt.horizon == ts.horizon


def test_forecast_result_repairs_crossed_bounds():
    fr = ForecastResult("naive", [5.0], [7.0], [3.0], 0.95)
    assert fr.lower[0] == 3.0
    assert fr.upper[0] == 7.0


def test_forecast_result_clamps_point():
    fr = ForecastResult("naive", [10.0], [1.0], [4.0], 0.95)
    assert fr.point[0] == 4.0


def test_forecast_result_shape_mismatch():
    with pytest.raises(LengthMismatch):
        ForecastResult("naive", [1.0, 2.0], [0.0], [3.0], 0.95)


def test_stack_results_preserves_order():
    a = ForecastResult("a", [1.0], [0.0], [2.0], 0.95)
    b = ForecastResult("b", [3.0], [2.0], [4.0], 0.95)
    fm = stack_results("S1", [a, b])
    assert fm.methods == ("a", "b")
    assert fm.point[1, 0] == 3.0
    assert fm.horizon == 1


def test_forecast_matrix_needs_two_methods():
    a = ForecastResult("a", [1.0], [0.0], [2.0], 0.95)
    with pytest.raises(ValueError):
        stack_results("S1", [a])


def test_immutability():
    ts = make_ts([1, 2, 3])
    with pytest.raises(ValueError):
        ts.values[0] = 99.0
