"""Classical theta method.

Implemented in its simple-exponential-smoothing form: SES with optimized
smoothing on the (deseasonalized) series plus a drift of half the slope of
the fitted linear trend, reseasonalized when the seasonality test fires.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from .. import backends as bk
from ..core import ForecastResult, TimeSeries
from ..seasonal import extend_indices, seasonal_indices, seasonality_test
from .simple import forecast_naive, z_value

_ALPHA_LO, _ALPHA_HI = 1e-4, 0.9999


def _ses(y: np.ndarray, alpha: float):
    ok, sse, _, _, level, _, _ = bk.ets_filter(
        y, 1, bk.ERR_ADD, bk.TREND_NONE, bk.SEASON_NONE,
        alpha, 0.0, 0.0, 1.0, float(y[0]), 0.0, None,
    )
    return ok, sse, level

def _fit_ses(y: np.ndarray):
    def objective(alpha):
        ok, sse, _ = _ses(y, alpha)
        return sse if ok else np.inf

    res = minimize_scalar(objective, bounds=(_ALPHA_LO, _ALPHA_HI), method="bounded")
    if not res.success or not np.isfinite(res.fun):
        raise RuntimeError("SES smoothing optimization failed")
    alpha = float(res.x)
    ok, sse, level = _ses(y, alpha)
    if not ok:
        raise RuntimeError("SES recursion degenerated")
    return alpha, sse, level


def theta_arrays(y: np.ndarray, h: int, level: float):
    y = np.asarray(y, dtype=float)
    t = y.shape[0]
    alpha, sse, ses_level = _fit_ses(y)
    tt = np.arange(t, dtype=float)
    slope = float(np.polyfit(tt, y, 1)[0]) if t >= 2 else 0.0
    steps = np.arange(1, h + 1, dtype=float)
    drift = 0.5 * slope * (steps - 1.0 + 1.0 / alpha - (1.0 - alpha) ** t / alpha)
    point = ses_level + drift
    sigma = np.sqrt(sse / max(t - 1, 1))
    half = z_value(level) * sigma * np.sqrt(1.0 + (steps - 1.0) * alpha**2)
    return point, point - half, point + half


def forecast_theta(train: TimeSeries, h: int, level: float, rng=None) -> ForecastResult:
    y = train.values
    m = train.period
    try:
        if seasonality_test(y, m):
            indices = seasonal_indices(y, m)
            if np.all(indices > 0.0):
                adjusted = y / extend_indices(indices, 0, y.shape[0])
                point, lower, upper = theta_arrays(adjusted, h, level)
                future = extend_indices(indices, y.shape[0], h)
                return ForecastResult(
                    "theta", point * future, lower * future, upper * future, level
                )
        point, lower, upper = theta_arrays(y, h, level)
        return ForecastResult("theta", point, lower, upper, level)
    except (RuntimeError, FloatingPointError):
        fallback = forecast_naive(train, h, level)
        return ForecastResult(
            "theta", fallback.point, fallback.lower, fallback.upper, level
        )
