"""Domain records: series, splits, forecasts, and frequency conventions.

Everything here is immutable after construction and safe to share across
worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, SeriesTooShort


def _frozen_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    arr = np.atleast_1d(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Frequency:
    """Sampling frequency with its seasonal period and default horizon."""

    label: str
    period: int
    default_horizon: int

    def __post_init__(self):
        if self.period < 1:
            raise ValueError(f"seasonal period must be >= 1, got {self.period}")
        if self.default_horizon < 1:
            raise ValueError("default horizon must be positive")


# Default horizons follow the M4 competition; seasonal periods follow the
# M4 MASE conventions (weekly and daily treated as non-seasonal).
FREQUENCIES: dict[str, Frequency] = {
    "yearly": Frequency("yearly", 1, 6),
    "quarterly": Frequency("quarterly", 4, 8),
    "monthly": Frequency("monthly", 12, 18),
    "weekly": Frequency("weekly", 1, 13),
    "daily": Frequency("daily", 1, 14),
    "hourly": Frequency("hourly", 24, 48),
}


def get_frequency(label: str) -> Frequency:
    try:
        return FREQUENCIES[label]
    except KeyError:
        raise ValueError(
            f"unknown frequency {label!r}; expected one of {sorted(FREQUENCIES)}"
        ) from None


@dataclass(frozen=True)
class TimeSeries:
    """One univariate series with its frequency and forecast horizon."""

    id: str
    frequency: Frequency
    values: np.ndarray
    horizon: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"series {self.id!r} contains non-finite values")
        if self.horizon <= 0:
            object.__setattr__(self, "horizon", self.frequency.default_horizon)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def period(self) -> int:
        return self.frequency.period


@dataclass(frozen=True)
class SplitSeries:
    """Training slice plus the held-out actuals used as validation targets."""

    train: TimeSeries
    test_actuals: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "test_actuals", _frozen_array(self.test_actuals))
        if self.test_actuals.shape[0] != self.train.horizon:
            raise LengthMismatch("test slice length must equal the horizon")


def split(series: TimeSeries) -> SplitSeries:
    """Hold out the last `horizon` observations as validation targets."""
    t = len(series)
    h = series.horizon
    if t <= h + series.period:
        raise SeriesTooShort(
            f"series {series.id!r}: length {t} <= horizon {h} + period {series.period}"
        )
    train = TimeSeries(series.id, series.frequency, series.values[: t - h], h)
    return SplitSeries(train, series.values[t - h :])


def join(parts: SplitSeries) -> TimeSeries:
    """Inverse of split: reconstruct the original series."""
    values = np.concatenate([parts.train.values, parts.test_actuals])
    return TimeSeries(parts.train.id, parts.train.frequency, values, parts.train.horizon)


@dataclass(frozen=True)
class ForecastResult:
    """Point forecasts with a prediction interval from a single method.

    Bounds are repaired at construction: crossed bounds are swapped and the
    point forecast is clamped into the interval, so downstream diversity and
    interval scoring always see well-ordered bounds.
    """

    method_id: str
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float

    def __post_init__(self):
        point = np.asarray(self.point, dtype=float)
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if not (point.shape == lower.shape == upper.shape) or point.ndim != 1:
            raise LengthMismatch("point/lower/upper must be 1-d and equal length")
        if not (
            np.all(np.isfinite(point))
            and np.all(np.isfinite(lower))
            and np.all(np.isfinite(upper))
        ):
            raise ValueError(f"method {self.method_id!r} produced non-finite forecasts")
        if not 0.0 < self.level < 1.0:
            raise ValueError("confidence level must be in (0, 1)")
        lo = np.minimum(lower, upper)
        hi = np.maximum(lower, upper)
        point = np.clip(point, lo, hi)
        for name, arr in (("point", point), ("lower", lo), ("upper", hi)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def horizon(self) -> int:
        return self.point.shape[0]


@dataclass(frozen=True)
class ForecastMatrix:
    """Stacked pool forecasts for one series, rows in canonical pool order."""

    series_id: str
    methods: tuple[str, ...]
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        m = len(self.methods)
        if m < 2:
            raise ValueError("a forecast pool needs at least two methods")
        for name in ("point", "lower", "upper"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape[0] != m:
                raise LengthMismatch(f"{name} matrix rows must match method count")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def horizon(self) -> int:
        return self.point.shape[1]


def stack_results(series_id: str, results: list[ForecastResult]) -> ForecastMatrix:
    """Assemble per-method results into a ForecastMatrix, preserving order."""
    return ForecastMatrix(
        series_id=series_id,
        methods=tuple(r.method_id for r in results),
        point=np.vstack([r.point for r in results]),
        lower=np.vstack([r.lower for r in results]),
        upper=np.vstack([r.upper for r in results]),
        level=results[0].level,
    )
