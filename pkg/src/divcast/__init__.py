"""divcast: diversity-weighted forecast combination.

Combines a fixed pool of classical forecasting methods using per-series
weights predicted from pairwise diversity features of the pool's
prediction-interval bounds. See README.md for the workflow.
"""

__version__ = "0.1.0"

from .backends import BACKEND
from .combiner import (
    CombinedForecast,
    ForecastPhaseResult,
    TrainPhaseResult,
    combine,
    forecast_phase,
    forecast_series,
    simple_average,
    train_phase,
    uniform_weights,
)
from .core import (
    FREQUENCIES,
    ForecastMatrix,
    ForecastResult,
    Frequency,
    TimeSeries,
    get_frequency,
    join,
    split,
    stack_results,
)
from .diversity import (
    DiversityVector,
    ambiguity_gap,
    extract_features,
    feature_names,
    pair_order,
)
from .errors import ConfigError, DivcastError, IngestError, ModelFormatError
from .evalharness import (
    MethodRanks,
    TradeoffCurve,
    mcb_test,
    summarize,
    tradeoff,
)
from .gbm import (
    GbmParams,
    TrainingSet,
    WeightModel,
    load_model,
    predict_weights,
    save_model,
    zero_round_model,
)
from .metrics import ErrorMatrix, err_cost, mase, msis, naive2_forecast
from .methods import DEFAULT_POOL, run_pool, validate_pool

__all__ = [
    "BACKEND",
    "CombinedForecast",
    "ConfigError",
    "DEFAULT_POOL",
    "DiversityVector",
    "DivcastError",
    "ErrorMatrix",
    "FREQUENCIES",
    "ForecastMatrix",
    "ForecastPhaseResult",
    "ForecastResult",
    "Frequency",
    "GbmParams",
    "IngestError",
    "MethodRanks",
    "ModelFormatError",
    "TimeSeries",
    "TradeoffCurve",
    "TrainPhaseResult",
    "TrainingSet",
    "WeightModel",
    "ambiguity_gap",
    "combine",
    "err_cost",
    "extract_features",
    "feature_names",
    "forecast_phase",
    "forecast_series",
    "get_frequency",
    "join",
    "load_model",
    "mase",
    "mcb_test",
    "msis",
    "naive2_forecast",
    "pair_order",
    "predict_weights",
    "run_pool",
    "save_model",
    "simple_average",
    "split",
    "stack_results",
    "summarize",
    "tradeoff",
    "train_phase",
    "uniform_weights",
    "validate_pool",
    "zero_round_model",
    "__version__",
]
