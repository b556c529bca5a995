"""Loess-based seasonal decomposition with an autoregression on the
seasonally adjusted series; the last seasonal cycle is carried forward."""

from __future__ import annotations

import numpy as np
from statsmodels.tsa.seasonal import STL

from ..core import ForecastResult, TimeSeries
from ..seasonal import acf
from .ets import forecast_ets
from .simple import z_value


def fit_ar_yule_walker(z: np.ndarray, max_order: int | None = None):
    """AR(p) by Yule-Walker with order chosen by AIC; returns (coefs, sigma2, mean)."""
    z = np.asarray(z, dtype=float)
    t = z.shape[0]
    mean = float(z.mean())
    zc = z - mean
    var = float(np.dot(zc, zc)) / t
    if max_order is None:
        max_order = int(min(t - 1, np.floor(10.0 * np.log10(t))))
    max_order = max(0, max_order)
    if var <= 0.0:
        return np.empty(0), 0.0, mean
    r = acf(z, max_order)
    best = (t * np.log(var), np.empty(0), var)  # p = 0
    for p in range(1, max_order + 1):
        toeplitz = np.array([[r[abs(i - j)] for j in range(p)] for i in range(p)])
        try:
            coefs = np.linalg.solve(toeplitz, r[1 : p + 1])
        except np.linalg.LinAlgError:
            continue
        sigma2 = var * (1.0 - float(np.dot(coefs, r[1 : p + 1])))
        if sigma2 <= 0.0:
            continue
        aic = t * np.log(sigma2) + 2.0 * p
        if aic < best[0]:
            best = (aic, coefs, sigma2)
    _, coefs, sigma2 = best
    return coefs, sigma2, mean


def ar_forecast(z: np.ndarray, coefs: np.ndarray, sigma2: float, mean: float, h: int):
    """Recursive AR forecasts with psi-weight prediction variances."""
    p = coefs.shape[0]
    history = list(np.asarray(z, dtype=float) - mean)
    point = np.empty(h)
    for step in range(h):
        val = sum(coefs[i] * history[-1 - i] for i in range(p)) if p else 0.0
        history.append(val)
        point[step] = val + mean
    psi = np.zeros(h)
    psi[0] = 1.0
    for j in range(1, h):
        psi[j] = sum(coefs[i] * psi[j - 1 - i] for i in range(min(j, p)))
    variances = sigma2 * np.cumsum(psi**2)
    return point, np.sqrt(variances)


def forecast_stlm_ar(train: TimeSeries, h: int, level: float, rng=None) -> ForecastResult:
    y = train.values
    m = train.period
    if m <= 1 or y.shape[0] < 2 * m + 1:
        base = forecast_ets(train, h, level, rng)
        return ForecastResult("stlm_ar", base.point, base.lower, base.upper, level)
    try:
        decomp = STL(y, period=m).fit()
    except Exception:
        base = forecast_ets(train, h, level, rng)
        return ForecastResult("stlm_ar", base.point, base.lower, base.upper, level)
    adjusted = y - decomp.seasonal
    coefs, sigma2, mean = fit_ar_yule_walker(adjusted)
    point, se = ar_forecast(adjusted, coefs, sigma2, mean, h)
    last_cycle = decomp.seasonal[-m:]
    seasonal = last_cycle[np.arange(h) % m]
    point = point + seasonal
    half = z_value(level) * se
    return ForecastResult("stlm_ar", point, point - half, point + half, level)
