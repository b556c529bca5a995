"""Pairwise forecast diversity and the per-series feature vector.

Diversity between two methods is the mean squared difference of their
forecast paths; scaled diversity normalizes each pairwise value by the sum
over all pairs so the features are scale-free. Features are computed on
the upper and lower interval bounds only: the point forecasts add no
information beyond the bounds for symmetric intervals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ForecastMatrix
from .errors import LengthMismatch


def pair_order(n_methods: int) -> list[tuple[int, int]]:
    """Canonical lexicographic (i, j) pairs, i < j, over pool order."""
    return [(i, j) for i in range(n_methods - 1) for j in range(i + 1, n_methods)]


@dataclass(frozen=True)
class DiversityVector:
    """Meta-learner feature row: one scaled diversity per pair and bound."""

    series_id: str
    upper_features: np.ndarray
    lower_features: np.ndarray

    def __post_init__(self):
        for name in ("upper_features", "lower_features"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.upper_features.shape != self.lower_features.shape:
            raise LengthMismatch("upper and lower feature blocks must match")

    def as_row(self) -> np.ndarray:
        return np.concatenate([self.upper_features, self.lower_features])


def pairwise_div(f_i, f_j) -> float:
    """Mean squared difference of two forecast paths."""
    f_i = np.asarray(f_i, dtype=float)
    f_j = np.asarray(f_j, dtype=float)
    if f_i.shape != f_j.shape or f_i.ndim != 1 or f_i.shape[0] < 1:
        raise LengthMismatch("forecast paths must be 1-d and equal length")
    d = f_i - f_j
    return float(np.mean(d * d))


def scaled_div_block(forecasts) -> np.ndarray:
    """Per-pair squared-difference sums normalized by the all-pairs total.

    When every pairwise difference is zero the whole block is zero, so
    "no diversity" stays representable rather than becoming uniform.
    """
    f = np.asarray(forecasts, dtype=float)
    if f.ndim != 2 or f.shape[0] < 2:
        raise LengthMismatch("need an M x H matrix with M >= 2")
    pairs = pair_order(f.shape[0])
    raw = np.array([float(np.sum((f[i] - f[j]) ** 2)) for i, j in pairs])
    total = raw.sum()
    if total == 0.0:
        return np.zeros(len(pairs))
    return raw / total


def extract_features(fm: ForecastMatrix) -> DiversityVector:
    """Scaled diversity of the upper and lower bounds, stacked upper-first."""
    return DiversityVector(
        series_id=fm.series_id,
        upper_features=scaled_div_block(fm.upper),
        lower_features=scaled_div_block(fm.lower),
    )


def feature_names(methods) -> list[str]:
    methods = list(methods)
    pairs = pair_order(len(methods))
    return [f"u_{i + 1}_{j + 1}" for i, j in pairs] + [
        f"l_{i + 1}_{j + 1}" for i, j in pairs
    ]


def ambiguity_gap(forecasts, actuals, weights) -> float:
    """Residual of the combined-error decomposition; zero in exact arithmetic.

    The mean squared error of a convex combination equals the weighted mean
    squared errors of the members minus the weighted pairwise diversities.
    """
    f = np.asarray(forecasts, dtype=float)
    y = np.asarray(actuals, dtype=float)
    w = np.asarray(weights, dtype=float)
    combined = w @ f
    mse_comb = float(np.mean((combined - y) ** 2))
    mse_each = np.mean((f - y) ** 2, axis=1)
    weighted = float(w @ mse_each)
    penalty = 0.0
    for i, j in pair_order(f.shape[0]):
        penalty += w[i] * w[j] * pairwise_div(f[i], f[j])
    return mse_comb - (weighted - penalty)
