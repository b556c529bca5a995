"""Innovations state-space exponential smoothing with AICc selection.

Candidates cross error {additive, multiplicative}, trend {none, additive,
damped}, and season {none, additive, multiplicative}. Multiplicative
components are only tried on strictly positive series; seasonal candidates
need more than two full cycles of data. Smoothing parameters are fitted by
Nelder-Mead from three start points; initial states come from a classical
decomposition heuristic. Intervals are simulated from the fitted model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .. import backends as bk
from ..core import ForecastResult, TimeSeries
from ..seasonal import seasonal_indices
from .simple import forecast_naive

_PENALTY = 1e12
_N_PATHS = 1000

_STARTS = [
    (0.2, 0.05, 0.05, 0.95),
    (0.5, 0.1, 0.1, 0.9),
    (0.05, 0.01, 0.01, 0.98),
]


@dataclass
class EtsFit:
    """A fitted smoothing model: components, parameters, states, score."""

    error: int
    trend: int
    season: int
    m: int
    alpha: float
    beta: float
    gamma: float
    phi: float
    l0: float
    b0: float
    s0: np.ndarray | None
    level_state: float
    trend_state: float
    season_states: np.ndarray
    sigma: float
    aicc: float
    n_obs: int

    @property
    def name(self) -> str:
        err = "AM"[self.error]
        trd = {bk.TREND_NONE: "N", bk.TREND_ADD: "A", bk.TREND_DAMPED: "Ad"}[self.trend]
        ssn = {bk.SEASON_NONE: "N", bk.SEASON_ADD: "A", bk.SEASON_MUL: "M"}[self.season]
        return f"ETS({err},{trd},{ssn})"


def _candidate_set(t: int, m: int, positive: bool):
    errors = [bk.ERR_ADD] + ([bk.ERR_MUL] if positive else [])
    trends = [bk.TREND_NONE, bk.TREND_ADD, bk.TREND_DAMPED]
    seasons = [bk.SEASON_NONE]
    if m > 1 and t >= 2 * m + 3:
        seasons.append(bk.SEASON_ADD)
        if positive:
            seasons.append(bk.SEASON_MUL)
    out = []
    for e in errors:
        for tr in trends:
            for s in seasons:
                min_len = 2 * m + 3 if s != bk.SEASON_NONE else 4
                if t >= min_len:
                    out.append((e, tr, s))
    return out


def _initial_states(y: np.ndarray, m: int, trend: int, season: int):
    if season == bk.SEASON_NONE:
        s0 = None
        adjusted = y
    elif season == bk.SEASON_MUL:
        s0 = seasonal_indices(y, m)
        if np.any(s0 <= 0.0):
            return None
        adjusted = y / s0[np.arange(y.shape[0]) % m]
    else:
        mul = seasonal_indices(y, m)
        mean = float(np.mean(y))
        s0 = (mul - 1.0) * mean  # additive indices, centered at zero
        adjusted = y - s0[np.arange(y.shape[0]) % m]
    head = adjusted[: min(adjusted.shape[0], 10)]
    if trend == bk.TREND_NONE:
        l0 = float(np.mean(head))
        b0 = 0.0
    else:
        tt = np.arange(head.shape[0], dtype=float)
        b0, l0 = (np.polyfit(tt, head, 1) if head.shape[0] >= 2 else (0.0, head[0]))
        l0 = float(l0)
        b0 = float(b0)
    return l0, b0, s0


def _pack(params, trend, season):
    """Expand the optimizer vector into (alpha, beta, gamma, phi)."""
    alpha = params[0]
    i = 1
    beta = gamma = 0.0
    phi = 1.0
    if trend != bk.TREND_NONE:
        beta = params[i]
        i += 1
    if season != bk.SEASON_NONE:
        gamma = params[i]
        i += 1
    if trend == bk.TREND_DAMPED:
        phi = params[i]
    return alpha, beta, gamma, phi


def _constraint_penalty(alpha, beta, gamma, phi, trend, season):
    pen = 0.0
    pen += max(0.0, 1e-4 - alpha) + max(0.0, alpha - 0.9999)
    if trend != bk.TREND_NONE:
        pen += max(0.0, 1e-4 - beta) + max(0.0, beta - alpha)
    if season != bk.SEASON_NONE:
        pen += max(0.0, 1e-4 - gamma) + max(0.0, gamma - (1.0 - alpha))
    if trend == bk.TREND_DAMPED:
        pen += max(0.0, 0.8 - phi) + max(0.0, phi - 0.98)
    return pen


def _neg_loglik(y, m, error, trend, season, alpha, beta, gamma, phi, init):
    t = y.shape[0]
    l0, b0, s0 = init
    ok, sse, sse_rel, sum_log_mu, *_ = bk.ets_filter(
        y, m, error, trend, season, alpha, beta, gamma, phi, l0, b0, s0
    )
    if not ok:
        return np.inf
    if error == bk.ERR_ADD:
        if sse <= 0.0:
            sse = 1e-300
        return t * np.log(sse / t)
    if sse_rel <= 0.0:
        sse_rel = 1e-300
    return t * np.log(sse_rel / t) + 2.0 * sum_log_mu


def _fit_candidate(y, m, error, trend, season):
    init = _initial_states(y, m, trend, season)
    if init is None:
        return None
    t = y.shape[0]

    def objective(params):
        alpha, beta, gamma, phi = _pack(params, trend, season)
        pen = _constraint_penalty(alpha, beta, gamma, phi, trend, season)
        if pen > 0.0:
            return _PENALTY * (1.0 + pen)
        return _neg_loglik(y, m, error, trend, season, alpha, beta, gamma, phi, init)

    n_par = 1 + (trend != bk.TREND_NONE) + (season != bk.SEASON_NONE) + (
        trend == bk.TREND_DAMPED
    )
    best = None
    for start in _STARTS:
        x0 = []
        alpha0, beta0, gamma0, phi0 = start
        x0.append(alpha0)
        if trend != bk.TREND_NONE:
            x0.append(beta0)
        if season != bk.SEASON_NONE:
            x0.append(gamma0)
        if trend == bk.TREND_DAMPED:
            x0.append(phi0)
        res = minimize(
            objective,
            np.asarray(x0),
            method="Nelder-Mead",
            options={"xatol": 1e-8, "fatol": 1e-8, "maxiter": 200 * n_par},
        )
        if np.isfinite(res.fun) and res.fun < _PENALTY:
            if best is None or res.fun < best.fun:
                best = res
    if best is None:
        return None
    alpha, beta, gamma, phi = _pack(best.x, trend, season)
    l0, b0, s0 = init
    ok, sse, sse_rel, _, lvl, b, s = bk.ets_filter(
        y, m, error, trend, season, alpha, beta, gamma, phi, l0, b0, s0
    )
    if not ok:
        return None
    k = (
        n_par
        + 1
        + (trend != bk.TREND_NONE)
        + (m - 1 if season != bk.SEASON_NONE else 0)
        + 1
    )
    if t - k - 1 <= 0:
        return None
    aicc = best.fun + 2 * k + 2.0 * k * (k + 1) / (t - k - 1)
    sigma = np.sqrt((sse_rel if error == bk.ERR_MUL else sse) / t)
    return EtsFit(
        error=error, trend=trend, season=season, m=m,
        alpha=alpha, beta=beta, gamma=gamma, phi=phi,
        l0=l0, b0=b0, s0=None if s0 is None else np.asarray(s0, dtype=float),
        level_state=lvl, trend_state=b,
        season_states=np.asarray(s, dtype=float),
        sigma=float(sigma), aicc=float(aicc), n_obs=t,
    )


def fit_ets(y: np.ndarray, m: int) -> EtsFit | None:
    """Fit every admissible candidate and keep the lowest AICc."""
    y = np.asarray(y, dtype=float)
    positive = bool(np.all(y > 0.0))
    best = None
    for error, trend, season in _candidate_set(y.shape[0], m, positive):
        fit = _fit_candidate(y, m, error, trend, season)
        if fit is not None and (best is None or fit.aicc < best.aicc):
            best = fit
    return best


def point_forecast(fit: EtsFit, h: int) -> np.ndarray:
    phi = 1.0 if fit.trend == bk.TREND_ADD else fit.phi
    lvl, b = fit.level_state, fit.trend_state
    t = fit.n_obs
    out = np.empty(h)
    phi_sum = 0.0
    for step in range(1, h + 1):
        if fit.trend == bk.TREND_NONE:
            q = lvl
        else:
            phi_sum += phi**step
            q = lvl + phi_sum * b
        if fit.season == bk.SEASON_NONE:
            out[step - 1] = q
        else:
            sc = fit.season_states[(t + step - 1) % fit.m]
            out[step - 1] = q + sc if fit.season == bk.SEASON_ADD else q * sc
    return out


def simulate_paths(fit: EtsFit, h: int, rng: np.random.Generator,
                   n_paths: int = _N_PATHS) -> np.ndarray:
    """Simulate future sample paths from the fitted model's final states."""
    phi = 1.0 if fit.trend == bk.TREND_ADD else fit.phi
    lvl = np.full(n_paths, fit.level_state)
    b = np.full(n_paths, fit.trend_state)
    m = fit.m
    s = np.tile(fit.season_states, (n_paths, 1)) if fit.season != bk.SEASON_NONE else None
    t = fit.n_obs
    paths = np.empty((n_paths, h))
    for step in range(h):
        q = lvl + phi * b if fit.trend != bk.TREND_NONE else lvl
        if fit.season == bk.SEASON_NONE:
            mu, ds, dl = q, 1.0, 1.0
        else:
            sc = s[:, (t + step) % m]
            if fit.season == bk.SEASON_ADD:
                mu, ds, dl = q + sc, 1.0, 1.0
            else:
                mu, ds, dl = q * sc, sc, q
        noise = rng.standard_normal(n_paths) * fit.sigma
        if fit.error == bk.ERR_ADD:
            e = noise
            y_new = mu + e
        else:
            y_new = mu * (1.0 + noise)
            e = y_new - mu
        paths[:, step] = y_new
        lvl = q + fit.alpha * e / ds
        if fit.trend != bk.TREND_NONE:
            b = phi * b + fit.beta * e / ds
        if fit.season != bk.SEASON_NONE:
            s[:, (t + step) % m] = sc + fit.gamma * e / dl
    return paths


def forecast_ets(train: TimeSeries, h: int, level: float, rng=None) -> ForecastResult:
    rng = rng if rng is not None else np.random.default_rng(0)
    fit = fit_ets(train.values, train.period)
    if fit is None:
        fallback = forecast_naive(train, h, level)
        return ForecastResult("ets", fallback.point, fallback.lower, fallback.upper, level)
    point = point_forecast(fit, h)
    paths = simulate_paths(fit, h, rng)
    tail = (1.0 - level) / 2.0
    lower = np.quantile(paths, tail, axis=0)
    upper = np.quantile(paths, 1.0 - tail, axis=0)
    return ForecastResult("ets", point, lower, upper, level)
