"""Two-phase combination workflow.

Phase 1 (training): split each reference series, forecast the held-out
window with the whole pool, extract diversity features, score each method
relative to the naive2 benchmark, and fit the weight model on the
assembled rows. Phase 2 (forecasting): refit the pool on full histories,
extract features, predict weights, and combine.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import partial

import numpy as np

from .core import ForecastMatrix, TimeSeries, split
from .diversity import extract_features
from .errors import (
    DegenerateBenchmark,
    DegenerateScale,
    DegenerateTraining,
    EmptyTrainingSet,
    NonSimplexWeights,
    SeriesTooShort,
    WeightLengthMismatch,
)
from .gbm import (
    GbmParams,
    TrainingSet,
    WeightModel,
    fit,
    predict_weights,
    zero_round_model,
)
from .metrics import err_cost, mase, msis, naive2_forecast
from .methods import run_pool, validate_pool

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CombinedForecast:
    series_id: str
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    weights: np.ndarray
    method_ids: tuple[str, ...]

    def __post_init__(self):
        for name in ("point", "lower", "upper", "weights"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "method_ids", tuple(self.method_ids))


def combine(fm: ForecastMatrix, weights) -> CombinedForecast:
    """Weighted combination of pool point forecasts and interval bounds."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(fm.methods),):
        raise WeightLengthMismatch(
            f"expected {len(fm.methods)} weights, got shape {w.shape}"
        )
    if abs(float(w.sum()) - 1.0) > 1e-9 or np.any(w < 0.0):
        raise NonSimplexWeights("weights must be nonnegative and sum to 1")
    return CombinedForecast(
        series_id=fm.series_id,
        point=w @ fm.point,
        lower=w @ fm.lower,
        upper=w @ fm.upper,
        weights=w,
        method_ids=fm.methods,
    )


def uniform_weights(n_methods: int) -> np.ndarray:
    return np.full(n_methods, 1.0 / n_methods)


def simple_average(fm: ForecastMatrix) -> CombinedForecast:
    """The simple-average benchmark: equal weights across the pool."""
    return combine(fm, uniform_weights(len(fm.methods)))


@dataclass(frozen=True)
class TrainingRow:
    series_id: str
    features: np.ndarray
    errs: np.ndarray
    mases: np.ndarray
    msises: np.ndarray


@dataclass(frozen=True)
class TrainPhaseResult:
    model: WeightModel
    rows: tuple[TrainingRow, ...]
    excluded: tuple[tuple[str, str], ...]  # (series_id, reason)


def training_row(series: TimeSeries, pool, level: float, alpha: float,
                 seed: int) -> TrainingRow | tuple[str, str]:
    """One reference series -> feature row plus per-method costs.

    Returns an (id, reason) pair instead when the series cannot be scored.
    """
    pool = validate_pool(pool)
    h = series.horizon
    m = series.period
    try:
        parts = split(series)
    except SeriesTooShort as exc:
        return (series.id, str(exc))
    fm = run_pool(parts.train, pool, h, level, seed)
    features = extract_features(fm).as_row()
    train_values = parts.train.values
    actuals = parts.test_actuals
    n2 = naive2_forecast(train_values, h, m, level)
    try:
        mase_n2 = mase(train_values, actuals, n2.point, m)
        msis_n2 = msis(train_values, actuals, n2.lower, n2.upper, m, 1.0 - level)
        mases = np.array(
            [mase(train_values, actuals, fm.point[i], m) for i in range(len(pool))]
        )
        msises = np.array(
            [
                msis(train_values, actuals, fm.lower[i], fm.upper[i], m, 1.0 - level)
                for i in range(len(pool))
            ]
        )
        errs = np.array(
            [err_cost(mases[i], msises[i], mase_n2, msis_n2) for i in range(len(pool))]
        )
    except (DegenerateScale, DegenerateBenchmark) as exc:
        return (series.id, str(exc))
    return TrainingRow(series.id, features, errs, mases, msises)


def train_phase(reference, pool, params: GbmParams, level: float = 0.95,
                seed: int = 0, mapper=map) -> TrainPhaseResult:
    """Fit the weight model on a reference set (Phase 1)."""
    pool = validate_pool(pool)
    if not reference:
        raise EmptyTrainingSet("reference set is empty")
    alpha = 1.0 - level
    worker = partial(training_row, pool=pool, level=level, alpha=alpha, seed=seed)
    outputs = list(mapper(worker, reference))
    rows = [o for o in outputs if isinstance(o, TrainingRow)]
    excluded = [o for o in outputs if not isinstance(o, TrainingRow)]
    if excluded:
        logger.info("excluded %d series from training", len(excluded))
    if not rows:
        raise EmptyTrainingSet("every reference series was excluded")
    rows.sort(key=lambda r: r.series_id)
    data = TrainingSet(
        X=np.vstack([r.features for r in rows]),
        E=np.vstack([r.errs for r in rows]),
    )
    try:
        model = fit(data, params, method_ids=pool)
    except DegenerateTraining:
        logger.warning("constant cost rows; falling back to uniform weights")
        model = zero_round_model(pool, data.X.shape[1], params)
    return TrainPhaseResult(
        model=model,
        rows=tuple(rows),
        excluded=tuple(sorted(excluded)),
    )


def forecast_series(series: TimeSeries, model: WeightModel, pool, level: float,
                    seed: int) -> tuple[CombinedForecast, ForecastMatrix]:
    """Phase 2 for one series: pool forecasts, weights, combination."""
    fm = run_pool(series, pool, series.horizon, level, seed)
    features = extract_features(fm).as_row()
    weights = predict_weights(model, features)
    return combine(fm, weights), fm


def _forecast_worker(series, model, pool, level, seed):
    try:
        combined, fm = forecast_series(series, model, pool, level, seed)
        return (series.id, combined, fm, None)
    except Exception as exc:  # isolate per-series failures
        return (series.id, None, None, f"{type(exc).__name__}: {exc}")


@dataclass(frozen=True)
class ForecastPhaseResult:
    combined: tuple[CombinedForecast, ...]
    matrices: tuple[ForecastMatrix, ...]
    failures: tuple[tuple[str, str], ...]


def forecast_phase(model: WeightModel, new_series, pool, level: float = 0.95,
                   seed: int = 0, mapper=map) -> ForecastPhaseResult:
    """Combine pool forecasts for new series (Phase 2).

    Per-series failures are reported and skipped, never abort the batch.
    """
    pool = validate_pool(pool)
    if model.feature_count != len(pool) * (len(pool) - 1):
        raise WeightLengthMismatch(
            "model feature count does not match the pool's diversity layout"
        )
    worker = partial(_forecast_worker, model=model, pool=pool, level=level, seed=seed)
    outputs = sorted(mapper(worker, new_series), key=lambda o: o[0])
    combined = tuple(o[1] for o in outputs if o[1] is not None)
    matrices = tuple(o[2] for o in outputs if o[2] is not None)
    failures = tuple((o[0], o[3]) for o in outputs if o[3] is not None)
    for sid, message in failures:
        logger.warning("series %s failed: %s", sid, message)
    return ForecastPhaseResult(combined, matrices, failures)
