"""The forecasting method pool behind a uniform interface.

Every method takes (train, horizon, level, rng) and returns a
ForecastResult. Methods never hard-fail inside the pool runner: each
declares a fallback, and every chain terminates at the naive method,
so a full pool matrix exists for every admissible series.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import ForecastMatrix, ForecastResult, TimeSeries, stack_results
from ..seeding import derive_rng
from .arima import forecast_auto_arima
from .boxcox import forecast_ets_boxcox
from .ets import forecast_ets
from .simple import forecast_naive, forecast_rw_drift, forecast_snaive
from .stlm import forecast_stlm_ar
from .theta import forecast_theta


@dataclass(frozen=True)
class MethodSpec:
    id: str
    display_name: str
    requires_seasonality: bool = False
    fallback_id: str | None = None


_FORECASTERS = {
    "auto_arima": forecast_auto_arima,
    "ets": forecast_ets,
    "ets_boxcox": forecast_ets_boxcox,
    "stlm_ar": forecast_stlm_ar,
    "rw_drift": forecast_rw_drift,
    "theta": forecast_theta,
    "naive": forecast_naive,
    "snaive": forecast_snaive,
}

METHOD_SPECS = {
    "auto_arima": MethodSpec("auto_arima", "Automatic ARIMA", False, "rw_drift"),
    "ets": MethodSpec("ets", "Exponential smoothing", False, "naive"),
    "ets_boxcox": MethodSpec("ets_boxcox", "Box-Cox exponential smoothing", False, "ets"),
    "stlm_ar": MethodSpec("stlm_ar", "STL with AR remainder", True, "ets"),
    "rw_drift": MethodSpec("rw_drift", "Random walk with drift", False, "naive"),
    "theta": MethodSpec("theta", "Theta", False, "naive"),
    "naive": MethodSpec("naive", "Naive", False, None),
    "snaive": MethodSpec("snaive", "Seasonal naive", True, "naive"),
}

# Canonical pool order: fixes forecast-matrix rows and the diversity layout.
DEFAULT_POOL = (
    "auto_arima", "ets", "ets_boxcox", "stlm_ar",
    "rw_drift", "theta", "naive", "snaive",
)


def validate_pool(method_ids) -> tuple[str, ...]:
    ids = tuple(method_ids)
    if len(ids) < 2:
        raise ValueError("a pool needs at least two methods")
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate method ids in pool")
    unknown = [i for i in ids if i not in METHOD_SPECS]
    if unknown:
        raise ValueError(f"unknown method ids: {unknown}")
    return ids


def forecast_with_fallback(method_id: str, train: TimeSeries, h: int,
                           level: float, seed: int) -> ForecastResult:
    """Run one method, walking its fallback chain on failure.

    The returned result keeps the original slot's method id so pool rows
    stay aligned regardless of which implementation produced the numbers.
    """
    current = method_id
    while True:
        rng = derive_rng(seed, train.id, method_id)
        try:
            result = _FORECASTERS[current](train, h, level, rng)
            if current != method_id:
                result = ForecastResult(
                    method_id, result.point, result.lower, result.upper, level
                )
            return result
        except Exception:
            fallback = METHOD_SPECS[current].fallback_id
            if fallback is None:
                raise
            current = fallback


def run_pool(train: TimeSeries, pool, h: int, level: float, seed: int) -> ForecastMatrix:
    """Forecast one series with every method in the pool."""
    pool = validate_pool(pool)
    results = [forecast_with_fallback(mid, train, h, level, seed) for mid in pool]
    return stack_results(train.id, results)
