"""Accuracy and interval-quality metrics, naive2 benchmark, training cost.

MASE and MSIS share the in-sample seasonal-naive mean absolute difference
as their scale; series where that scale is zero raise DegenerateScale and
are excluded (never epsilon-substituted) by callers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ForecastResult
from .errors import (
    DegenerateBenchmark,
    DegenerateScale,
    EmptyInput,
    LengthMismatch,
    NonpositiveHistoryMean,
)
from .methods.simple import naive_arrays
from .seasonal import extend_indices, seasonal_indices, seasonality_test


@dataclass(frozen=True)
class ErrorMatrix:
    """Per-series, per-method training costs with companion raw metrics."""

    series_ids: tuple[str, ...]
    method_ids: tuple[str, ...]
    err: np.ndarray
    mase: np.ndarray
    msis: np.ndarray

    def __post_init__(self):
        n, m = len(self.series_ids), len(self.method_ids)
        for name in ("err", "mase", "msis"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n, m):
                raise LengthMismatch(f"{name} must have shape ({n}, {m})")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def _scale(train: np.ndarray, m: int) -> float:
    train = np.asarray(train, dtype=float)
    t = train.shape[0]
    if t <= m:
        raise DegenerateScale(f"training length {t} must exceed seasonal period {m}")
    denom = float(np.mean(np.abs(train[m:] - train[:-m])))
    if denom == 0.0:
        raise DegenerateScale("seasonal-naive in-sample differences are all zero")
    return denom


def mase(train, actuals, point, m: int) -> float:
    """Mean absolute error scaled by the in-sample seasonal-naive MAE."""
    actuals = np.asarray(actuals, dtype=float)
    point = np.asarray(point, dtype=float)
    if actuals.shape != point.shape:
        raise LengthMismatch("actuals and forecasts must have equal length")
    return float(np.mean(np.abs(point - actuals))) / _scale(train, m)


def msis(train, actuals, lower, upper, m: int, alpha: float = 0.05) -> float:
    """Mean scaled interval score: width plus 2/alpha-penalized exceedances."""
    actuals = np.asarray(actuals, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if not (actuals.shape == lower.shape == upper.shape):
        raise LengthMismatch("actuals and bounds must have equal length")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    score = (
        (upper - lower)
        + (2.0 / alpha) * (lower - actuals) * (actuals < lower)
        + (2.0 / alpha) * (actuals - upper) * (actuals > upper)
    )
    return float(np.mean(score)) / _scale(train, m)


def err_cost(mase_val: float, msis_val: float, mase_n2: float, msis_n2: float) -> float:
    """Training cost: mean of the MASE and MSIS ratios against naive2."""
    if mase_n2 <= 0.0 or msis_n2 <= 0.0:
        raise DegenerateBenchmark("naive2 benchmark error is zero")
    return 0.5 * (mase_val / mase_n2 + msis_val / msis_n2)


def naive2_forecast(train, h: int, m: int, level: float) -> ForecastResult:
    """Naive forecast on seasonally adjusted data, reseasonalized.

    Falls back to the plain naive output when the seasonality test does not
    fire or any seasonal index is nonpositive.
    """
    y = np.asarray(train, dtype=float)
    if m > 1 and seasonality_test(y, m):
        indices = seasonal_indices(y, m)
        if np.all(indices > 0.0):
            adjusted = y / extend_indices(indices, 0, y.shape[0])
            point, lower, upper = naive_arrays(adjusted, h, level)
            future = extend_indices(indices, y.shape[0], h)
            return ForecastResult(
                "naive2", point * future, lower * future, upper * future, level
            )
    point, lower, upper = naive_arrays(y, h, level)
    return ForecastResult("naive2", point, lower, upper, level)


def upper_coverage(actuals: list, uppers: list) -> float:
    """Fraction of (series, step) pairs with the actual at or below the bound."""
    if len(actuals) != len(uppers):
        raise LengthMismatch("actuals and upper bounds must align by series")
    hits = 0
    total = 0
    for a, u in zip(actuals, uppers):
        a = np.asarray(a, dtype=float)
        u = np.asarray(u, dtype=float)
        if a.shape != u.shape:
            raise LengthMismatch("per-series actual/bound lengths differ")
        hits += int(np.sum(a <= u))
        total += a.shape[0]
    if total == 0:
        raise EmptyInput("coverage of an empty forecast set is undefined")
    return hits / total


def scaled_upper_pi(train, upper) -> float:
    """Mean upper bound over the mean of the historical data."""
    train = np.asarray(train, dtype=float)
    hist_mean = float(np.mean(train))
    if hist_mean <= 0.0:
        raise NonpositiveHistoryMean("history mean must be positive for scaling")
    return float(np.mean(np.asarray(upper, dtype=float))) / hist_mean
