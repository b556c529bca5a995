import numpy as np
import pytest

from divcast.core import ForecastMatrix, TimeSeries, get_frequency


def make_ts(values, frequency="yearly", sid="S1", horizon=0):
    return TimeSeries(sid, get_frequency(frequency), np.asarray(values, dtype=float),
                      horizon)


def make_matrix(point, lower=None, upper=None, methods=None, sid="S1"):
    point = np.asarray(point, dtype=float)
    lower = point - 1.0 if lower is None else np.asarray(lower, dtype=float)
    upper = point + 1.0 if upper is None else np.asarray(upper, dtype=float)
    if methods is None:
        methods = tuple(f"m{i + 1}" for i in range(point.shape[0]))
    return ForecastMatrix(sid, tuple(methods), point, lower, upper, 0.95)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
