"""Batch orchestration: configuration, the parallel runner, and the
subcommand implementations behind the CLI.

A run is driven by one RunConfig (config file plus flag overrides; flags
win). Every run writes a manifest capturing the effective configuration,
seed, backend, and hashes of any model files it produced or consumed, so
artifacts are traceable to their inputs. Reruns with the same config and
seed are byte-identical regardless of parallelism.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import yaml

from . import __version__
from .backends import BACKEND
from .combiner import (
    ForecastPhaseResult,
    forecast_phase,
    simple_average,
    train_phase,
)
from .core import FREQUENCIES, TimeSeries, get_frequency
from .data import (
    ingest_long,
    ingest_m4,
    write_features_csv,
    write_forecasts_csv,
    write_metrics_csv,
    write_pool_forecasts_csv,
    write_weights_csv,
)
from .diversity import extract_features
from .errors import ConfigError, DegenerateScale, DivcastError
from .evalharness import (
    TRADEOFF_LEVELS,
    mcb_test,
    plot_mcb,
    plot_tradeoff,
    summarize,
    tradeoff,
    write_mcb_csv,
    write_summary_csv,
    write_tradeoff_csv,
)
from .gbm import GbmParams, load_model, save_model
from .methods import DEFAULT_POOL, run_pool, validate_pool
from .metrics import ErrorMatrix, mase, msis

_GBM_KEYS = {f.name for f in dataclasses.fields(GbmParams)}
_CONFIG_KEYS = {
    "data", "test_data", "format", "frequency", "pool", "level",
    "threads", "seed", "out", "gbm", "tradeoff",
}

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 3


@dataclass(frozen=True)
class RunConfig:
    data: str | None = None
    test_data: str | None = None
    format: str = "m4"
    frequency: str | None = None
    pool: tuple[str, ...] = DEFAULT_POOL
    level: float = 0.95
    threads: int = 0
    seed: int = 0
    out: str = "out"
    gbm: dict = field(default_factory=dict)
    tradeoff: bool = False

    def __post_init__(self):
        if self.format not in ("m4", "long"):
            raise ConfigError(f"format must be m4|long, got {self.format!r}")
        if not 0.0 < self.level < 1.0:
            raise ConfigError("level must be in (0, 1)")
        validate_pool(self.pool)
        unknown = set(self.gbm) - _GBM_KEYS
        if unknown:
            raise ConfigError(f"unknown gbm keys: {sorted(unknown)}")
        if self.frequency is not None:
            try:
                get_frequency(self.frequency)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None

    def gbm_params(self) -> GbmParams:
        overrides = dict(self.gbm)
        overrides.setdefault("seed", self.seed)
        return GbmParams(**overrides)

    def n_workers(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["pool"] = list(self.pool)
        # runtime placement details, not modeling inputs; identical modeling
        # runs must produce identical manifests regardless of parallelism
        del d["threads"], d["out"]
        return d


def load_config(path=None, overrides=None) -> RunConfig:
    """Read the config file (if any) and apply flag overrides on top."""
    raw: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            loaded = yaml.safe_load(fh) or {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: config must be a mapping")
        raw = loaded
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown configuration keys: {sorted(unknown)}")
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})
    if "pool" in raw:
        raw["pool"] = tuple(raw["pool"])
    return RunConfig(**raw)


@dataclass(frozen=True)
class Dataset:
    frequency: str
    series: tuple[TimeSeries, ...]
    actuals: dict  # series_id -> np.ndarray, empty when no test data


def discover_datasets(cfg: RunConfig, need_test: bool) -> list[Dataset]:
    """Resolve the configured data path into per-frequency datasets."""
    if cfg.data is None:
        raise ConfigError("no data path configured")
    datasets = []
    if os.path.isdir(cfg.data):
        labels = [cfg.frequency] if cfg.frequency else sorted(FREQUENCIES)
        for label in labels:
            train_path = os.path.join(cfg.data, f"{label}_train.csv")
            if not os.path.exists(train_path):
                if cfg.frequency:
                    raise ConfigError(f"missing data file {train_path}")
                continue
            test_path = os.path.join(cfg.data, f"{label}_test.csv")
            has_test = os.path.exists(test_path)
            if need_test and not has_test:
                raise ConfigError(f"missing test file {test_path}")
            series, actuals = ingest_m4(
                train_path, test_path if has_test else None, get_frequency(label)
            )
            datasets.append(Dataset(label, tuple(series), actuals))
    else:
        if cfg.frequency is None:
            raise ConfigError("a frequency is required with a single data file")
        freq = get_frequency(cfg.frequency)
        if cfg.format == "long":
            series = ingest_long(cfg.data, freq)
            actuals = {}
            if need_test:
                raise ConfigError("long-format data has no test file; "
                                  "evaluation needs m4-format train/test data")
        else:
            if need_test and cfg.test_data is None:
                raise ConfigError("test data path required for evaluation")
            series, actuals = ingest_m4(cfg.data, cfg.test_data, freq)
        datasets.append(Dataset(cfg.frequency, tuple(series), actuals))
    if not datasets:
        raise ConfigError(f"no datasets found under {cfg.data}")
    return datasets


def _init_worker():
    # avoid BLAS oversubscription inside the process pool
    os.environ.setdefault("OMP_NUM_THREADS", "1")
    os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")


class _Runner:
    """map() over series, in-process or via a process pool."""

    def __init__(self, workers: int):
        self.workers = workers

    def __enter__(self):
        self._pool = None
        if self.workers > 1:
            self._pool = ProcessPoolExecutor(
                max_workers=self.workers, initializer=_init_worker
            )
        return self

    def __exit__(self, *exc):
        if self._pool is not None:
            self._pool.shutdown()
        return False

    def map(self, fn, items):
        items = list(items)
        if self._pool is None:
            return [fn(x) for x in items]
        chunk = max(1, len(items) // (self.workers * 4))
        return list(self._pool.map(fn, items, chunksize=chunk))


def _model_path(cfg: RunConfig, frequency: str) -> str:
    return os.path.join(cfg.out, f"model_{frequency}.json")


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(cfg: RunConfig, model_paths: list[str]) -> str:
    manifest = {
        "package_version": __version__,
        "backend": BACKEND,
        "config": cfg.as_dict(),
        "model_hashes": {
            os.path.basename(p): _sha256(p)
            for p in sorted(model_paths)
            if os.path.exists(p)
        },
    }
    path = os.path.join(cfg.out, "run_manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _write_errors(cfg: RunConfig, records: list[dict]) -> None:
    if not records:
        return
    path = os.path.join(cfg.out, "errors.jsonl")
    with open(path, "w", encoding="utf-8") as fh:
        for rec in sorted(records, key=lambda r: (r.get("frequency", ""),
                                                  r.get("series_id", ""))):
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def run_pool_forecast(cfg: RunConfig) -> int:
    """Fit the pool on full histories and export the forecast matrices."""
    os.makedirs(cfg.out, exist_ok=True)
    datasets = discover_datasets(cfg, need_test=False)
    with _Runner(cfg.n_workers()) as runner:
        for ds in datasets:
            matrices = runner.map(
                _PoolWorker(cfg.pool, cfg.level, cfg.seed), ds.series
            )
            write_pool_forecasts_csv(
                os.path.join(cfg.out, f"pool_forecasts_{ds.frequency}.csv"), matrices
            )
            write_features_csv(
                os.path.join(cfg.out, f"features_{ds.frequency}.csv"),
                [extract_features(fm) for fm in matrices],
                cfg.pool,
            )
    write_manifest(cfg, [])
    return EXIT_OK


class _PoolWorker:
    def __init__(self, pool, level, seed):
        self.pool = pool
        self.level = level
        self.seed = seed

    def __call__(self, series):
        return run_pool(series, self.pool, series.horizon, self.level, self.seed)


class _PoolLevelWorker(_PoolWorker):
    def __init__(self, pool, level, seed, horizon_levels):
        super().__init__(pool, level, seed)
        self.horizon_levels = horizon_levels

    def __call__(self, series):
        return {
            lvl: run_pool(series, self.pool, series.horizon, lvl, self.seed)
            for lvl in self.horizon_levels
        }


def run_train(cfg: RunConfig) -> int:
    """Phase 1 for every frequency: train and persist one model each."""
    os.makedirs(cfg.out, exist_ok=True)
    datasets = discover_datasets(cfg, need_test=False)
    params = cfg.gbm_params()
    model_paths = []
    exclusion_records = []
    with _Runner(cfg.n_workers()) as runner:
        for ds in datasets:
            result = train_phase(
                list(ds.series), cfg.pool, params, cfg.level, cfg.seed,
                mapper=runner.map,
            )
            path = _model_path(cfg, ds.frequency)
            save_model(result.model, path)
            model_paths.append(path)
            errors = ErrorMatrix(
                series_ids=tuple(r.series_id for r in result.rows),
                method_ids=cfg.pool,
                err=np.vstack([r.errs for r in result.rows]),
                mase=np.vstack([r.mases for r in result.rows]),
                msis=np.vstack([r.msises for r in result.rows]),
            )
            write_metrics_csv(
                os.path.join(cfg.out, f"training_metrics_{ds.frequency}.csv"), errors
            )
            for sid, reason in result.excluded:
                exclusion_records.append(
                    {"frequency": ds.frequency, "series_id": sid,
                     "stage": "train", "reason": reason}
                )
    _write_exclusions(cfg, exclusion_records)
    write_manifest(cfg, model_paths)
    return EXIT_OK


def _write_exclusions(cfg: RunConfig, records: list[dict]) -> None:
    path = os.path.join(cfg.out, "exclusions.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("frequency,series_id,stage,reason\n")
        for rec in sorted(records, key=lambda r: (r["frequency"], r["series_id"])):
            reason = rec["reason"].replace('"', "'")
            fh.write(f'{rec["frequency"]},{rec["series_id"]},{rec["stage"]},"{reason}"\n')


def _run_forecast_phase(cfg: RunConfig, datasets, runner) -> dict[str, ForecastPhaseResult]:
    results = {}
    for ds in datasets:
        model = load_model(_model_path(cfg, ds.frequency))
        results[ds.frequency] = forecast_phase(
            model, list(ds.series), cfg.pool, cfg.level, cfg.seed,
            mapper=runner.map,
        )
    return results


def run_forecast(cfg: RunConfig) -> int:
    """Phase 2: combined forecasts plus the simple-average benchmark."""
    os.makedirs(cfg.out, exist_ok=True)
    datasets = discover_datasets(cfg, need_test=False)
    failures = []
    with _Runner(cfg.n_workers()) as runner:
        phase = _run_forecast_phase(cfg, datasets, runner)
    for frequency, result in sorted(phase.items()):
        write_forecasts_csv(
            os.path.join(cfg.out, f"forecasts_{frequency}.csv"), list(result.combined)
        )
        write_weights_csv(
            os.path.join(cfg.out, f"weights_{frequency}.csv"), list(result.combined)
        )
        sa = [simple_average(fm) for fm in result.matrices]
        write_forecasts_csv(
            os.path.join(cfg.out, f"sa_forecasts_{frequency}.csv"), sa
        )
        for sid, message in result.failures:
            failures.append(
                {"frequency": frequency, "series_id": sid, "error": message}
            )
    _write_errors(cfg, failures)
    write_manifest(cfg, [_model_path(cfg, ds.frequency) for ds in datasets])
    if failures:
        total = sum(len(ds.series) for ds in datasets)
        return EXIT_FATAL if len(failures) == total else EXIT_PARTIAL
    return EXIT_OK


def run_evaluate(cfg: RunConfig) -> int:
    """Score diversity, the simple average, and every pool method."""
    os.makedirs(cfg.out, exist_ok=True)
    datasets = discover_datasets(cfg, need_test=True)
    per_series: dict[str, dict[str, tuple[float, float]]] = {}
    freq_of: dict[str, str] = {}
    exclusion_records = []
    failure_records = []
    alpha = 1.0 - cfg.level
    model_paths = []
    with _Runner(cfg.n_workers()) as runner:
        phase = _run_forecast_phase(cfg, datasets, runner)
        for ds in datasets:
            model_paths.append(_model_path(cfg, ds.frequency))
            result = phase[ds.frequency]
            history = {s.id: s for s in ds.series}
            approach_errors: dict[str, dict[str, tuple[float, float]]] = {}
            for combined, fm in zip(result.combined, result.matrices):
                sid = combined.series_id
                series = history[sid]
                actuals = ds.actuals[sid]
                m = series.period
                train_values = series.values
                try:
                    entries = {"diversity": combined, "sa": simple_average(fm)}
                    scores = {}
                    for name, fc in entries.items():
                        scores[name] = (
                            mase(train_values, actuals, fc.point, m),
                            msis(train_values, actuals, fc.lower, fc.upper, m, alpha),
                        )
                    for i, mid in enumerate(fm.methods):
                        scores[mid] = (
                            mase(train_values, actuals, fm.point[i], m),
                            msis(train_values, actuals, fm.lower[i], fm.upper[i],
                                 m, alpha),
                        )
                except DegenerateScale as exc:
                    exclusion_records.append(
                        {"frequency": ds.frequency, "series_id": sid,
                         "stage": "evaluate", "reason": str(exc)}
                    )
                    continue
                freq_of[sid] = ds.frequency
                for name, pair in scores.items():
                    approach_errors.setdefault(name, {})[sid] = pair
            for sid, message in result.failures:
                failure_records.append(
                    {"frequency": ds.frequency, "series_id": sid, "error": message}
                )
            if approach_errors:
                _emit_frequency_reports(cfg, ds.frequency, approach_errors)
            for name, vals in approach_errors.items():
                per_series.setdefault(name, {}).update(vals)
        if cfg.tradeoff:
            for ds in datasets:
                _emit_tradeoff(cfg, ds, runner, exclusion_records)
    if per_series:
        rows = summarize(per_series, freq_of)
        write_summary_csv(os.path.join(cfg.out, "summary.csv"), rows)
        _emit_overall_mcb(cfg, per_series)
    _write_exclusions(cfg, exclusion_records)
    _write_errors(cfg, failure_records)
    write_manifest(cfg, model_paths)
    if failure_records:
        total = sum(len(ds.series) for ds in datasets)
        return EXIT_FATAL if len(failure_records) >= total else EXIT_PARTIAL
    return EXIT_OK


def _ranks_from_scores(approach_errors):
    names = sorted(approach_errors)
    ids = sorted(set.intersection(*[set(approach_errors[n]) for n in names]))
    if len(ids) < 2:
        return None
    errors = np.array(
        [[approach_errors[n][sid][0] for n in names] for sid in ids]
    )
    return mcb_test(errors, names)


def _emit_frequency_reports(cfg, frequency, approach_errors) -> None:
    ranks = _ranks_from_scores(approach_errors)
    if ranks is None:
        return
    write_mcb_csv(os.path.join(cfg.out, f"mcb_{frequency}.csv"), ranks)
    plot_mcb(os.path.join(cfg.out, f"mcb_{frequency}.svg"), ranks,
             title=f"Mean ranks ({frequency})")


def _emit_overall_mcb(cfg, per_series) -> None:
    ranks = _ranks_from_scores(per_series)
    if ranks is None:
        return
    write_mcb_csv(os.path.join(cfg.out, "mcb_overall.csv"), ranks)
    plot_mcb(os.path.join(cfg.out, "mcb_overall.svg"), ranks, title="Mean ranks (overall)")


def _emit_tradeoff(cfg, ds, runner, exclusion_records) -> None:
    """Trade-off curves need pool forecasts at every listed level."""
    worker = _PoolLevelWorker(cfg.pool, cfg.level, cfg.seed, TRADEOFF_LEVELS)
    per_series_levels = runner.map(worker, ds.series)
    model = load_model(_model_path(cfg, ds.frequency))
    history = {s.id: s for s in ds.series}
    curves = []
    names = ["diversity", "sa"] + list(cfg.pool)
    per_level_data = {name: {lvl: [] for lvl in TRADEOFF_LEVELS} for name in names}
    for series, by_level in zip(ds.series, per_series_levels):
        actuals = ds.actuals[series.id]
        base_fm = by_level[max(TRADEOFF_LEVELS)]
        from .gbm import predict_weights

        weights = predict_weights(model, extract_features(base_fm).as_row())
        for lvl, fm in by_level.items():
            per_level_data["diversity"][lvl].append(
                (series.values, actuals, weights @ fm.upper)
            )
            per_level_data["sa"][lvl].append(
                (series.values, actuals, fm.upper.mean(axis=0))
            )
            for i, mid in enumerate(fm.methods):
                per_level_data[mid][lvl].append((series.values, actuals, fm.upper[i]))
    for name in names:
        curves.append(tradeoff(name, per_level_data[name]))
    write_tradeoff_csv(os.path.join(cfg.out, f"tradeoff_{ds.frequency}.csv"), curves)
    plot_tradeoff(os.path.join(cfg.out, f"tradeoff_{ds.frequency}.svg"), curves,
                  title=f"Coverage versus scaled upper interval ({ds.frequency})")


def run_all(cfg: RunConfig) -> int:
    """Full workflow: pool artifacts, training, forecasts, evaluation."""
    status = run_pool_forecast(cfg)
    status = max(status, run_train(cfg))
    status = max(status, run_forecast(cfg))
    status = max(status, run_evaluate(cfg))
    return status


SUBCOMMANDS = {
    "pool-forecast": run_pool_forecast,
    "extract": run_pool_forecast,  # features are emitted with the matrices
    "train": run_train,
    "forecast": run_forecast,
    "evaluate": run_evaluate,
    "all": run_all,
}
