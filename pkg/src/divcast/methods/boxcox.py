"""Exponential smoothing on Box-Cox transformed data.

Pool substitute for a full trigonometric-seasonality state-space model:
it keeps the variance-stabilizing transform, which is what the pool's
diversity benefits from, behind the same method interface.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from ..core import ForecastResult, TimeSeries
from .ets import forecast_ets


def guerrero_lambda(y: np.ndarray, m: int, bounds=(0.0, 1.0)) -> float:
    """Guerrero's method: pick the power that stabilizes block-level spread."""
    y = np.asarray(y, dtype=float)
    block = max(m, 2)
    n_blocks = y.shape[0] // block
    if n_blocks < 2:
        return 1.0
    trimmed = y[y.shape[0] - n_blocks * block :].reshape(n_blocks, block)
    means = trimmed.mean(axis=1)
    stds = trimmed.std(axis=1, ddof=1)
    if np.any(means <= 0.0):
        return 1.0

    def cv(lam):
        ratio = stds / means ** (1.0 - lam)
        mean = ratio.mean()
        if mean <= 0.0:
            return np.inf
        return ratio.std(ddof=1) / mean

    res = minimize_scalar(cv, bounds=bounds, method="bounded")
    return float(res.x) if res.success and np.isfinite(res.fun) else 1.0


def boxcox_transform(y: np.ndarray, lam: float) -> np.ndarray:
    if abs(lam) < 1e-9:
        return np.log(y)
    return (np.power(y, lam) - 1.0) / lam


def inv_boxcox(w: np.ndarray, lam: float) -> np.ndarray:
    if abs(lam) < 1e-9:
        return np.exp(w)
    inner = np.maximum(lam * w + 1.0, 1e-12)
    return np.power(inner, 1.0 / lam)


def forecast_ets_boxcox(train: TimeSeries, h: int, level: float, rng=None,
                        lam: float | None = None) -> ForecastResult:
    y = train.values
    if np.any(y <= 0.0):
        base = forecast_ets(train, h, level, rng)
        return ForecastResult("ets_boxcox", base.point, base.lower, base.upper, level)
    if lam is None:
        lam = guerrero_lambda(y, train.period)
    transformed = TimeSeries(train.id, train.frequency, boxcox_transform(y, lam),
                             train.horizon)
    base = forecast_ets(transformed, h, level, rng)
    return ForecastResult(
        "ets_boxcox",
        inv_boxcox(base.point, lam),
        inv_boxcox(base.lower, lam),
        inv_boxcox(base.upper, lam),
        level,
    )
