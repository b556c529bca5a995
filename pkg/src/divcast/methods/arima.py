"""Stepwise ARIMA order search with AICc selection.

Differencing orders come first (KPSS for d, a seasonal-strength heuristic
for D), then a stepwise neighborhood search over (p,q)(P,Q) and the
constant term, mirroring the usual automatic-ARIMA procedure. Candidates
are ranked with a fast approximation (simple differencing, capped
iterations); the selected model is refit exactly by maximum likelihood.
"""

from __future__ import annotations

import warnings

import numpy as np
from statsmodels.tools.sm_exceptions import InterpolationWarning
from statsmodels.tsa.arima.model import ARIMA
from statsmodels.tsa.seasonal import STL
from statsmodels.tsa.statespace.sarimax import SARIMAX
from statsmodels.tsa.stattools import kpss

from ..core import ForecastResult, TimeSeries
from .simple import forecast_rw_drift

_MAX_P = _MAX_Q = 5
_MAX_PS = _MAX_QS = 2
_MAX_D = 2
_MAX_FITS = 60
_SEASONAL_STRENGTH_THRESHOLD = 0.64


def choose_seasonal_diff(y: np.ndarray, m: int) -> int:
    if m <= 1 or y.shape[0] < 2 * m + 5:
        return 0
    try:
        decomp = STL(y, period=m).fit()
    except Exception:
        return 0
    detrended = decomp.seasonal + decomp.resid
    var_detrended = float(np.var(detrended))
    if var_detrended <= 0.0:
        return 0
    strength = max(0.0, 1.0 - float(np.var(decomp.resid)) / var_detrended)
    return 1 if strength >= _SEASONAL_STRENGTH_THRESHOLD else 0


def choose_diff(y: np.ndarray, max_d: int = _MAX_D, alpha: float = 0.05) -> int:
    d = 0
    x = np.asarray(y, dtype=float)
    while d < max_d and x.shape[0] > 8:
        if float(np.var(x)) == 0.0:
            break
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", InterpolationWarning)
            try:
                _, pvalue, *_ = kpss(x, regression="c", nlags="auto")
            except (ValueError, OverflowError):
                break
        if pvalue >= alpha:  # stationarity not rejected
            break
        x = np.diff(x)
        d += 1
    return d


def _search_aicc(y, order, seasonal_order, trend, cache):
    """Cheap AICc for candidate ranking.

    Fits on the pre-differenced series (simple differencing), which keeps
    the state dimension small; d and D are fixed across the whole search,
    so the rankings stay comparable. The winner is refit exactly afterwards.
    """
    key = (order, seasonal_order, trend)
    if key in cache:
        return cache[key]
    result = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            model = SARIMAX(
                y,
                order=order,
                seasonal_order=seasonal_order,
                trend="c" if trend != "n" else "n",
                enforce_stationarity=True,
                enforce_invertibility=True,
                concentrate_scale=True,
                simple_differencing=True,
            )
            fitted = model.fit(disp=0, maxiter=30)
            if np.isfinite(fitted.aicc):
                result = float(fitted.aicc)
        except (ValueError, np.linalg.LinAlgError, IndexError):
            result = None
    cache[key] = result
    return result


def _final_fit(y, order, seasonal_order, trend):
    """Exact maximum-likelihood refit of the selected model."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            model = ARIMA(
                y,
                order=order,
                seasonal_order=seasonal_order,
                trend=trend,
                enforce_stationarity=True,
                enforce_invertibility=True,
                concentrate_scale=True,
            )
            return model.fit()
        except (ValueError, np.linalg.LinAlgError, IndexError):
            return None


def _trend_options(d: int, ds: int, want_constant: bool):
    total = d + ds
    if not want_constant or total > 1:
        return "n"
    return "c" if total == 0 else "t"


def stepwise_search(y: np.ndarray, m: int):
    """Return the best fitted model found by the stepwise search, or None."""
    y = np.asarray(y, dtype=float)
    t = y.shape[0]
    seasonal = m > 1 and t >= 2 * m + 5
    ds = choose_seasonal_diff(y, m) if seasonal else 0
    work = y[ds * m :] - y[: -ds * m] if ds else y
    d = choose_diff(work)

    max_ps = _MAX_PS if seasonal else 0
    max_qs = _MAX_QS if seasonal else 0

    def clamp(candidate):
        p, q, ps, qs, const = candidate
        if not (0 <= p <= _MAX_P and 0 <= q <= _MAX_Q):
            return None
        if not (0 <= ps <= max_ps and 0 <= qs <= max_qs):
            return None
        return candidate

    starts = [(2, 2, 1, 1, True), (0, 0, 0, 0, True), (1, 0, 1, 0, True), (0, 1, 0, 1, True)]
    if d + ds > 1:
        starts = [(p, q, ps, qs, False) for p, q, ps, qs, _ in starts]

    cache: dict = {}
    fits = 0
    best_key = None
    best = None

    def evaluate(candidate):
        nonlocal fits, best_key, best
        candidate = clamp(candidate)
        if candidate is None or fits >= _MAX_FITS:
            return
        p, q, ps, qs, const = candidate
        order = (p, d, q)
        seasonal_order = (ps, ds, qs, m) if seasonal else (0, 0, 0, 0)
        trend = _trend_options(d, ds, const)
        fits += 1
        aicc = _search_aicc(y, order, seasonal_order, trend, cache)
        if aicc is not None and (best is None or aicc < best):
            best = aicc
            best_key = candidate

    for start in starts:
        evaluate(start)
    if best is None:
        return None

    improved = True
    while improved and fits < _MAX_FITS:
        improved = False
        p, q, ps, qs, const = best_key
        neighbors = [
            (p + 1, q, ps, qs, const), (p - 1, q, ps, qs, const),
            (p, q + 1, ps, qs, const), (p, q - 1, ps, qs, const),
            (p + 1, q + 1, ps, qs, const), (p - 1, q - 1, ps, qs, const),
            (p, q, ps + 1, qs, const), (p, q, ps - 1, qs, const),
            (p, q, ps, qs + 1, const), (p, q, ps, qs - 1, const),
            (p, q, ps, qs, not const),
        ]
        current_best = best
        for cand in neighbors:
            evaluate(cand)
            if best < current_best:
                # first-improvement descent: move to the new best right away
                improved = True
                break

    p, q, ps, qs, const = best_key
    return _final_fit(
        y, (p, d, q), (ps, ds, qs, m) if seasonal else (0, 0, 0, 0),
        _trend_options(d, ds, const),
    )


def forecast_auto_arima(train: TimeSeries, h: int, level: float, rng=None) -> ForecastResult:
    y = train.values
    if y.shape[0] < 8:
        base = forecast_rw_drift(train, h, level)
        return ForecastResult("auto_arima", base.point, base.lower, base.upper, level)
    fitted = stepwise_search(y, train.period)
    if fitted is None:
        base = forecast_rw_drift(train, h, level)
        return ForecastResult("auto_arima", base.point, base.lower, base.upper, level)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pred = fitted.get_forecast(h)
        point = np.asarray(pred.predicted_mean, dtype=float)
        conf = np.asarray(pred.conf_int(alpha=1.0 - level), dtype=float)
    if not (np.all(np.isfinite(point)) and np.all(np.isfinite(conf))):
        base = forecast_rw_drift(train, h, level)
        return ForecastResult("auto_arima", base.point, base.lower, base.upper, level)
    return ForecastResult("auto_arima", point, conf[:, 0], conf[:, 1], level)
