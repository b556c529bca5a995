"""Naive, seasonal naive, and random walk with drift."""

from __future__ import annotations

import numpy as np
from scipy.stats import norm

from ..core import ForecastResult, TimeSeries
from ..errors import SeriesTooShort


def z_value(level: float) -> float:
    return float(norm.ppf(0.5 + level / 2.0))


def _std(residuals: np.ndarray) -> float:
    if residuals.size < 2:
        return 0.0
    return float(np.std(residuals, ddof=1))


def naive_arrays(y: np.ndarray, h: int, level: float):
    """Last-value forecast with Gaussian random-walk intervals."""
    y = np.asarray(y, dtype=float)
    point = np.full(h, y[-1])
    sigma = _std(np.diff(y))
    half = z_value(level) * sigma * np.sqrt(np.arange(1, h + 1))
    return point, point - half, point + half


def forecast_naive(train: TimeSeries, h: int, level: float, rng=None) -> ForecastResult:
    point, lower, upper = naive_arrays(train.values, h, level)
    return ForecastResult("naive", point, lower, upper, level)


def forecast_snaive(train: TimeSeries, h: int, level: float, rng=None) -> ForecastResult:
    """Repeat the last seasonal cycle; interval width grows per cycle ahead."""
    y = train.values
    m = train.period
    t = y.shape[0]
    if m <= 1 or t < m:
        result = forecast_naive(train, h, level)
        return ForecastResult("snaive", result.point, result.lower, result.upper, level)
    steps = np.arange(1, h + 1)
    point = y[t + steps - 1 - m * np.ceil(steps / m).astype(int)]
    sigma = _std(y[m:] - y[:-m])
    half = z_value(level) * sigma * np.sqrt((steps - 1) // m + 1)
    return ForecastResult("snaive", point, point - half, point + half, level)


def rw_drift_arrays(y: np.ndarray, h: int, level: float):
    y = np.asarray(y, dtype=float)
    t = y.shape[0]
    if t < 2:
        raise SeriesTooShort("random walk with drift needs at least 2 observations")
    drift = (y[-1] - y[0]) / (t - 1)
    steps = np.arange(1, h + 1)
    point = y[-1] + steps * drift
    sigma = _std(np.diff(y) - drift)
    half = z_value(level) * sigma * np.sqrt(steps * (1.0 + steps / (t - 1)))
    return point, point - half, point + half


def forecast_rw_drift(train: TimeSeries, h: int, level: float, rng=None) -> ForecastResult:
    point, lower, upper = rw_drift_arrays(train.values, h, level)
    return ForecastResult("rw_drift", point, lower, upper, level)
