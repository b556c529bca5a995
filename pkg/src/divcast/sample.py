"""Synthetic data with known generators.

Used for the bundled offline sample shipped with the repository and for
the desk-scale benchmark corpora in the test suite. The generator mix is
deliberately heterogeneous (trends, seasonal patterns, random walks,
noise regimes) so that no single pool method dominates everywhere.
"""

from __future__ import annotations

import os

import numpy as np

from .core import FREQUENCIES, TimeSeries
from .seeding import derive_rng

_KINDS = (
    "trend_season_add",
    "trend_season_mul",
    "random_walk_drift",
    "ar1_level",
    "seasonal_stable",
    "exponential_growth",
    "noisy_level",
)


def _generate(kind: str, length: int, m: int, rng: np.random.Generator) -> np.ndarray:
    t = np.arange(length, dtype=float)
    base = rng.uniform(200.0, 2000.0)
    season = np.zeros(length)
    if m > 1:
        amp = rng.uniform(0.05, 0.35)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        harmonics = np.sin(2.0 * np.pi * t / m + phase)
        if rng.random() < 0.5:
            harmonics += 0.4 * np.sin(4.0 * np.pi * t / m + rng.uniform(0, 2 * np.pi))
        season = amp * harmonics

    if kind == "trend_season_add":
        slope = rng.uniform(-0.3, 1.5) * base / 200.0
        noise = rng.normal(0.0, rng.uniform(0.01, 0.06) * base, length)
        y = base + slope * t + base * season + noise
    elif kind == "trend_season_mul":
        slope = rng.uniform(0.0, 1.2) * base / 200.0
        level = base + slope * t
        noise = rng.normal(0.0, rng.uniform(0.01, 0.05), length)
        y = level * (1.0 + season) * (1.0 + noise)
    elif kind == "random_walk_drift":
        drift = rng.uniform(-0.2, 0.6) * base / 200.0
        steps = rng.normal(drift, rng.uniform(0.01, 0.05) * base, length)
        y = base + np.cumsum(steps)
    elif kind == "ar1_level":
        phi = rng.uniform(0.5, 0.95)
        sigma = rng.uniform(0.02, 0.08) * base
        shocks = rng.normal(0.0, sigma, length)
        y = np.empty(length)
        y[0] = base
        for i in range(1, length):
            y[i] = base + phi * (y[i - 1] - base) + shocks[i]
        y = y + base * season
    elif kind == "seasonal_stable":
        noise = rng.normal(0.0, rng.uniform(0.005, 0.04) * base, length)
        y = base * (1.0 + season) + noise
    elif kind == "exponential_growth":
        rate = rng.uniform(0.002, 0.012)
        noise = rng.normal(0.0, rng.uniform(0.01, 0.04), length)
        y = base * np.exp(rate * t) * (1.0 + season) * (1.0 + noise)
    elif kind == "noisy_level":
        noise = rng.normal(0.0, rng.uniform(0.05, 0.15) * base, length)
        y = base + noise
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    # keep series positive, as in typical demand/competition data
    floor = 0.05 * base
    return np.maximum(y, floor)


def make_series(sid: str, frequency_label: str, seed: int,
                min_len: int, max_len: int):
    """One synthetic series plus its future actuals (one horizon ahead)."""
    freq = FREQUENCIES[frequency_label]
    rng = derive_rng(seed, "sample", sid)
    kind = _KINDS[int(rng.integers(len(_KINDS)))]
    h = freq.default_horizon
    length = int(rng.integers(min_len, max_len + 1))
    values = _generate(kind, length + h, freq.period, rng)
    history = TimeSeries(sid, freq, values[:length], h)
    return history, values[length:]


_SAMPLE_MIX = (
    ("monthly", 40, 60, 240),
    ("quarterly", 18, 28, 100),
    ("yearly", 18, 16, 40),
    ("weekly", 6, 80, 200),
    ("daily", 6, 93, 200),
    ("hourly", 12, 120, 240),
)


def make_sample(seed: int = 1):
    """The bundled 100-series mixed-frequency sample."""
    series = []
    actuals = {}
    for label, count, lo, hi in _SAMPLE_MIX:
        prefix = label[0].upper()
        for i in range(count):
            sid = f"{prefix}{i + 1}"
            ts, future = make_series(sid, label, seed, lo, hi)
            series.append(ts)
            actuals[sid] = future
    return series, actuals


def make_monthly_corpus(n: int = 1000, seed: int = 20240401):
    """Monthly benchmark corpus for desk-scale evaluation runs."""
    series = []
    actuals = {}
    for i in range(n):
        sid = f"M{i + 1}"
        ts, future = make_series(sid, "monthly", seed, 60, 240)
        series.append(ts)
        actuals[sid] = future
    return series, actuals


def write_sample_dataset(outdir, seed: int = 1) -> list[str]:
    """Write the bundled sample as per-frequency wide train/test CSVs."""
    os.makedirs(outdir, exist_ok=True)
    series, actuals = make_sample(seed)
    by_freq: dict[str, list[TimeSeries]] = {}
    for ts in series:
        by_freq.setdefault(ts.frequency.label, []).append(ts)
    written = []
    for label in sorted(by_freq):
        group = sorted(by_freq[label], key=lambda s: s.id)
        max_len = max(len(s) for s in group)
        train_path = os.path.join(outdir, f"{label}_train.csv")
        with open(train_path, "w", encoding="utf-8") as fh:
            fh.write("id," + ",".join(f"v{i + 1}" for i in range(max_len)) + "\n")
            for ts in group:
                cells = [repr(float(v)) for v in ts.values]
                cells += [""] * (max_len - len(cells))
                fh.write(ts.id + "," + ",".join(cells) + "\n")
        h = group[0].horizon
        test_path = os.path.join(outdir, f"{label}_test.csv")
        with open(test_path, "w", encoding="utf-8") as fh:
            fh.write("id," + ",".join(f"v{i + 1}" for i in range(h)) + "\n")
            for ts in group:
                cells = [repr(float(v)) for v in actuals[ts.id]]
                fh.write(ts.id + "," + ",".join(cells) + "\n")
        written += [train_path, test_path]
    return written
