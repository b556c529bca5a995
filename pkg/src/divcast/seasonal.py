"""Seasonality detection and classical multiplicative decomposition.

Follows the M4 competition conventions: a 90% autocorrelation test at the
seasonal lag decides whether a series is treated as seasonal, and seasonal
indices come from a multiplicative classical decomposition with a centered
moving-average trend.
"""

from __future__ import annotations

import numpy as np


def acf(y: np.ndarray, nlags: int) -> np.ndarray:
    """Sample autocorrelations r_0..r_nlags (biased normalization)."""
    y = np.asarray(y, dtype=float)
    t = y.shape[0]
    yc = y - y.mean()
    denom = float(np.dot(yc, yc))
    out = np.empty(nlags + 1)
    out[0] = 1.0
    if denom == 0.0:
        out[1:] = 0.0
        return out
    for k in range(1, nlags + 1):
        out[k] = float(np.dot(yc[k:], yc[:-k])) / denom if k < t else 0.0
    return out


def seasonality_test(y: np.ndarray, m: int) -> bool:
    """True when the lag-m autocorrelation clears the 90% significance band.

    The band accounts for the lower-lag autocorrelations, as in the M4
    benchmark code. Non-seasonal frequencies (m <= 1) and series shorter
    than three full cycles return False.
    """
    y = np.asarray(y, dtype=float)
    t = y.shape[0]
    if m <= 1 or t < 3 * m:
        return False
    r = acf(y, m)
    band = 1.645 * np.sqrt((1.0 + 2.0 * np.sum(r[1:m] ** 2)) / t)
    return bool(abs(r[m]) > band)


def seasonal_indices(y: np.ndarray, m: int) -> np.ndarray:
    """Multiplicative seasonal indices, one per phase, normalized to mean 1.

    Phase j corresponds to time index t with t % m == j, counting from the
    first observation of y.
    """
    y = np.asarray(y, dtype=float)
    t = y.shape[0]
    if m % 2 == 0:
        # centered moving average: half weights at the window ends
        w = np.full(m + 1, 1.0 / m)
        w[0] = w[-1] = 0.5 / m
    else:
        w = np.full(m, 1.0 / m)
    trend = np.convolve(y, w, mode="valid")
    offset = (len(w) - 1) // 2
    ratios = np.full(t, np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios[offset : offset + trend.shape[0]] = np.where(
            trend != 0.0, y[offset : offset + trend.shape[0]] / trend, np.nan
        )
    idx = np.empty(m)
    for j in range(m):
        vals = ratios[j::m]
        vals = vals[np.isfinite(vals)]
        idx[j] = vals.mean() if vals.size else 1.0
    mean = idx.mean()
    if mean == 0.0 or not np.isfinite(mean):
        return np.ones(m)
    return idx / mean


def extend_indices(indices: np.ndarray, t: int, h: int) -> np.ndarray:
    """Indices for forecast steps t..t+h-1 given per-phase indices."""
    m = indices.shape[0]
    return indices[(np.arange(t, t + h)) % m]
