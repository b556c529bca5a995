"""The compiled kernels must agree bitwise with the pure fallback."""

import numpy as np
import pytest

from divcast.backends import pure

compiled = pytest.importorskip("divcast.backends._kernels_cy")


def _random_ets_args(rng):
    t = int(rng.integers(8, 80))
    m = int(rng.choice([1, 4, 12]))
    y = rng.uniform(5.0, 500.0, t)
    error = int(rng.integers(2))
    trend = int(rng.integers(3))
    season = int(rng.integers(3)) if m > 1 and t >= 2 * m + 3 else 0
    alpha = rng.uniform(1e-3, 0.99)
    beta = rng.uniform(1e-3, alpha)
    gamma = rng.uniform(1e-3, 1.0 - alpha)
    phi = rng.uniform(0.8, 0.98)
    l0 = float(y[: max(m, 1)].mean())
    b0 = float(rng.normal(0.0, 1.0))
    s0 = np.ones(m) if season == 2 else np.zeros(m)
    return (y, m, error, trend, season, alpha, beta, gamma, phi, l0, b0, s0)


def test_ets_filter_bitwise_equal():
    rng = np.random.default_rng(7)
    for _ in range(100):
        args = _random_ets_args(rng)
        r_pure = pure.ets_filter(*[np.copy(a) if isinstance(a, np.ndarray) else a
                                   for a in args])
        r_cy = compiled.ets_filter(*[np.copy(a) if isinstance(a, np.ndarray) else a
                                     for a in args])
        for a, b in zip(r_pure, r_cy):
            assert np.array_equal(np.asarray(a, dtype=float),
                                  np.asarray(b, dtype=float))


def test_best_split_bitwise_equal():
    rng = np.random.default_rng(11)
    for _ in range(300):
        n = int(rng.integers(2, 50))
        n_feat = int(rng.integers(1, 10))
        # rounding forces repeated values, exercising tie handling
        xs = np.sort(rng.normal(size=(n_feat, n)).round(1), axis=1)
        gs = rng.normal(size=(n_feat, n))
        hs = rng.uniform(1e-3, 1.0, size=(n_feat, n))
        lam = float(rng.uniform(0.0, 2.0))
        mch = float(rng.choice([0.0, 1e-3, 0.1]))
        assert pure.best_split(xs, gs, hs, lam, mch) == compiled.best_split(
            xs, gs, hs, lam, mch
        )


def test_backend_selection_env(monkeypatch):
    import importlib

    import divcast.backends as bk

    monkeypatch.setenv("DIVCAST_BACKEND", "pure")
    mod = importlib.reload(bk)
    assert mod.BACKEND == "pure"
    monkeypatch.delenv("DIVCAST_BACKEND")
    mod = importlib.reload(bk)
    assert mod.BACKEND == "compiled"


def test_best_split_constant_feature_no_split():
    xs = np.zeros((1, 5))
    gs = np.ones((1, 5))
    hs = np.ones((1, 5))
    feat, _, gain = pure.best_split(xs, gs, hs, 1.0, 0.0)
    assert feat == -1
    assert gain <= 0.0
