import numpy as np
import pytest

from divcast.errors import (
    DegenerateBenchmark,
    DegenerateScale,
    EmptyInput,
    NonpositiveHistoryMean,
)
from divcast.metrics import (
    err_cost,
    mase,
    msis,
    naive2_forecast,
    scaled_upper_pi,
    upper_coverage,
)
from divcast.methods.simple import forecast_naive
from divcast.seasonal import seasonality_test

from conftest import make_ts


class TestMase:
    def test_golden_one(self):
        assert mase([1, 2, 3, 4], [5, 6], [4, 5], 1) == 1.0

    def test_perfect_forecast(self):
        assert mase([1, 2, 3, 4], [5, 6], [5, 6], 1) == 0.0

    def test_degenerate_scale(self):
        with pytest.raises(DegenerateScale):
            mase([2, 2, 2], [2], [2], 1)

    def test_rescaling_invariance(self, rng):
        train = rng.uniform(1, 10, 30)
        actuals = rng.uniform(1, 10, 4)
        point = rng.uniform(1, 10, 4)
        base = mase(train, actuals, point, 1)
        scaled = mase(7.3 * train, 7.3 * actuals, 7.3 * point, 1)
        assert scaled == pytest.approx(base, rel=1e-12)

    def test_seasonal_scale(self):
        # m=2: denominator averages |y_t - y_{t-2}|
        train = [1.0, 2.0, 3.0, 4.0]  # diffs at lag 2: 2, 2 -> scale 2
        assert mase(train, [6.0], [5.0], 2) == 0.5


class TestMsis:
    def test_golden_inside(self):
        assert msis([1, 2, 3], [3], [2], [4], 1, 0.05) == 2.0

    def test_golden_upper_exceedance(self):
        assert msis([1, 2, 3], [5], [2], [4], 1, 0.05) == 42.0

    def test_golden_lower_exceedance(self):
        assert msis([1, 2, 3], [1], [2], [4], 1, 0.05) == 42.0

    def test_inside_equals_mean_width_over_scale(self, rng):
        train = np.cumsum(rng.uniform(0.5, 1.5, 20))
        actuals = train[-1] + rng.uniform(-0.1, 0.1, 5)
        lower = actuals - rng.uniform(1, 2, 5)
        upper = actuals + rng.uniform(1, 2, 5)
        scale = np.mean(np.abs(np.diff(train)))
        expected = np.mean(upper - lower) / scale
        assert msis(train, actuals, lower, upper, 1, 0.05) == pytest.approx(
            expected, rel=1e-12
        )

    def test_rescaling_invariance(self, rng):
        train = rng.uniform(1, 10, 30)
        actuals = rng.uniform(1, 10, 4)
        lower = actuals - rng.uniform(0, 2, 4)
        upper = actuals + rng.uniform(0, 2, 4)
        base = msis(train, actuals, lower, upper, 1, 0.05)
        scaled = msis(3 * train, 3 * actuals, 3 * lower, 3 * upper, 1, 0.05)
        assert scaled == pytest.approx(base, rel=1e-12)

    def test_degenerate_scale(self):
        with pytest.raises(DegenerateScale):
            msis([5, 5, 5], [5], [4], [6], 1, 0.05)


class TestErrCost:
    def test_self_relative(self):
        assert err_cost(1.3, 4.2, 1.3, 4.2) == 1.0

    def test_derived_half(self):
        assert err_cost(1, 3, 2, 6) == 0.5

    def test_perfect(self):
        assert err_cost(0, 0, 2, 6) == 0.0

    def test_degenerate_benchmark(self):
        with pytest.raises(DegenerateBenchmark):
            err_cost(1, 1, 0, 6)
        with pytest.raises(DegenerateBenchmark):
            err_cost(1, 1, 2, 0)


class TestNaive2:
    def test_non_seasonal_equals_naive(self, rng):
        y = rng.normal(50, 5, 40)
        ts = make_ts(y, "yearly", horizon=6)
        naive = forecast_naive(ts, 6, 0.95)
        n2 = naive2_forecast(y, 6, 1, 0.95)
        assert np.array_equal(n2.point, naive.point)
        assert np.array_equal(n2.lower, naive.lower)
        assert np.array_equal(n2.upper, naive.upper)

    def test_m1_equals_naive(self, rng):
        y = np.cumsum(rng.normal(0, 1, 30)) + 100
        ts = make_ts(y, "yearly", horizon=4)
        naive = forecast_naive(ts, 4, 0.95)
        n2 = naive2_forecast(y, 4, 1, 0.95)
        assert np.array_equal(n2.point, naive.point)

    def test_pure_seasonal_reproduction(self):
        m = 4
        pattern = np.array([0.7, 1.3, 0.9, 1.1])
        c = 80.0
        y = c * np.tile(pattern, 12)
        n2 = naive2_forecast(y, 8, m, 0.95)
        expected = c * np.tile(pattern, 2)
        assert np.allclose(n2.point, expected, atol=1e-6)


class TestSeasonalityTest:
    def test_m1_false(self, rng):
        assert not seasonality_test(rng.normal(size=50), 1)

    def test_pure_sine_true(self):
        m = 12
        t = np.arange(10 * m)
        y = 100 + 10 * np.sin(2 * np.pi * t / m)
        assert seasonality_test(y, m)

    def test_white_noise_mostly_false(self):
        m = 12
        hits = 0
        for seed in range(20):
            y = np.random.default_rng(seed).normal(size=10 * m)
            hits += not seasonality_test(y, m)
        assert hits >= 18

    def test_short_series_false(self, rng):
        assert not seasonality_test(rng.normal(size=20), 12)


class TestCoverage:
    def test_all_below(self):
        assert upper_coverage([[1, 2], [3]], [[5, 5], [5]]) == 1.0

    def test_half_below(self):
        assert upper_coverage([[1, 9]], [[5, 5]]) == 0.5

    def test_empty(self):
        with pytest.raises(EmptyInput):
            upper_coverage([], [])


class TestScaledUpperPi:
    def test_ratio(self):
        assert scaled_upper_pi([10.0, 10.0], [20.0, 20.0]) == 2.0

    def test_unit(self):
        assert scaled_upper_pi([4.0, 6.0], [5.0, 5.0]) == 1.0

    def test_nonpositive_mean(self):
        with pytest.raises(NonpositiveHistoryMean):
            scaled_upper_pi([1.0, -1.0], [2.0])
