import numpy as np
import pytest

from divcast.methods.simple import (
    forecast_naive,
    forecast_rw_drift,
    forecast_snaive,
)

from conftest import make_ts


class TestNaive:
    def test_constant_series_degenerate_interval(self):
        ts = make_ts([5, 5, 5], horizon=2)
        fr = forecast_naive(ts, 2, 0.95)
        assert np.array_equal(fr.point, [5, 5])
        assert np.array_equal(fr.lower, [5, 5])
        assert np.array_equal(fr.upper, [5, 5])

    def test_last_value_repeated(self):
        ts = make_ts([1, 2, 3], horizon=2)
        fr = forecast_naive(ts, 2, 0.95)
        assert np.array_equal(fr.point, [3, 3])

    def test_zero_sigma_residuals(self):
        # residuals of [1,2,3] at lag 1 are [1,1]: sample std 0
        ts = make_ts([1, 2, 3], horizon=1)
        fr = forecast_naive(ts, 1, 0.95)
        assert fr.lower[0] == 3.0
        assert fr.upper[0] == 3.0

    def test_interval_width_grows(self, rng):
        ts = make_ts(np.cumsum(rng.normal(size=50)) + 100, horizon=6)
        fr = forecast_naive(ts, 6, 0.95)
        widths = fr.upper - fr.lower
        assert np.all(np.diff(widths) > 0)


class TestSnaive:
    def test_one_cycle_repeat(self):
        ts = make_ts([1, 2, 3, 4], "quarterly", horizon=4)
        fr = forecast_snaive(ts, 4, 0.95)
        assert np.array_equal(fr.point, [1, 2, 3, 4])

    def test_six_step_index_formula(self):
        ts = make_ts([1, 2, 3, 4], "quarterly", horizon=6)
        fr = forecast_snaive(ts, 6, 0.95)
        assert np.array_equal(fr.point, [1, 2, 3, 4, 1, 2])

    def test_m1_equals_naive(self, rng):
        y = rng.normal(10, 2, 20)
        ts = make_ts(y, "yearly", horizon=3)
        sn = forecast_snaive(ts, 3, 0.95)
        nv = forecast_naive(ts, 3, 0.95)
        assert np.array_equal(sn.point, nv.point)
        assert np.array_equal(sn.lower, nv.lower)

    def test_width_grows_with_cycles(self, rng):
        y = np.tile([10.0, 20.0, 15.0, 25.0], 6) + rng.normal(0, 1, 24)
        ts = make_ts(y, "quarterly", horizon=8)
        fr = forecast_snaive(ts, 8, 0.95)
        widths = fr.upper - fr.lower
        # second seasonal cycle ahead has wider intervals than the first
        assert np.all(widths[4:] > widths[:4])


class TestRwDrift:
    def test_unit_drift(self):
        ts = make_ts([1, 2, 3, 4], horizon=2)
        fr = forecast_rw_drift(ts, 2, 0.95)
        assert np.allclose(fr.point, [5, 6])

    def test_zero_drift(self):
        ts = make_ts([7, 7, 7], horizon=3)
        fr = forecast_rw_drift(ts, 3, 0.95)
        assert np.allclose(fr.point, [7, 7, 7])

    def test_two_point_drift(self):
        ts = make_ts([0, 2], horizon=1)
        fr = forecast_rw_drift(ts, 1, 0.95)
        assert fr.point[0] == pytest.approx(4.0)

    def test_interval_width_grows(self, rng):
        ts = make_ts(np.cumsum(rng.normal(0.5, 1, 60)) + 50, horizon=8)
        fr = forecast_rw_drift(ts, 8, 0.95)
        widths = fr.upper - fr.lower
        assert np.all(np.diff(widths) > 0)
