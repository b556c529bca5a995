"""CSV ingestion and artifact export.

Two input layouts are supported: the wide competition layout
(`id, v1, v2, ...` with ragged trailing blanks) paired with a test file of
future actuals, and a long layout (`id, index, value`) for case-study
style data. All files are UTF-8, comma-separated, header row required,
`.` decimal separator.
"""

from __future__ import annotations

import csv

import numpy as np

from .combiner import CombinedForecast
from .core import Frequency, TimeSeries
from .diversity import DiversityVector, feature_names
from .errors import (
    DuplicateId,
    MissingTestRow,
    NonContiguousIndex,
    UnparsableValue,
)
from .metrics import ErrorMatrix


def _parse_value(text: str, path, row: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise UnparsableValue(
            f"{path}: row {row}, column {col}: cannot parse {text!r}"
        ) from None
    if not np.isfinite(value):
        raise UnparsableValue(f"{path}: row {row}, column {col}: non-finite value")
    return value


def _read_wide(path) -> dict[str, np.ndarray]:
    out: dict[str, np.ndarray] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader, None)  # header
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            sid = row[0].strip().strip('"')
            if not sid:
                raise UnparsableValue(f"{path}: row {row_num}: empty series id")
            if sid in out:
                raise DuplicateId(f"{path}: duplicate series id {sid!r}")
            values = []
            for col, cell in enumerate(row[1:], start=2):
                cell = cell.strip()
                if cell == "" or cell.upper() == "NA":
                    continue  # ragged trailing blanks
                values.append(_parse_value(cell, path, row_num, col))
            out[sid] = np.asarray(values, dtype=float)
    return out


def min_series_length(frequency: Frequency) -> int:
    return max(3, frequency.period + 1)


def ingest_m4(train_csv, test_csv, frequency: Frequency,
              horizon: int | None = None):
    """Parse competition-layout train/test files.

    Returns (series, actuals): the training histories and a dict of
    held-out actuals aligned by id. Series shorter than the ingestion
    minimum are dropped (and reported via the second return value's keys).
    """
    h = horizon if horizon is not None else frequency.default_horizon
    train_rows = _read_wide(train_csv)
    test_rows = _read_wide(test_csv) if test_csv is not None else None
    series = []
    actuals: dict[str, np.ndarray] = {}
    for sid in sorted(train_rows):
        values = train_rows[sid]
        if values.shape[0] < min_series_length(frequency):
            continue
        if test_rows is not None:
            if sid not in test_rows:
                raise MissingTestRow(f"{test_csv}: no test row for series {sid!r}")
            actuals[sid] = test_rows[sid][:h]
        series.append(TimeSeries(sid, frequency, values, h))
    return series, actuals


def ingest_long(path, frequency: Frequency, horizon: int | None = None):
    """Parse long-layout data: columns id, index, value."""
    h = horizon if horizon is not None else frequency.default_horizon
    rows: dict[str, list[tuple[int, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 3:
                raise UnparsableValue(f"{path}: row {row_num}: expected 3 columns")
            sid = row[0].strip()
            try:
                index = int(row[1])
            except ValueError:
                raise UnparsableValue(
                    f"{path}: row {row_num}: bad index {row[1]!r}"
                ) from None
            value = _parse_value(row[2].strip(), path, row_num, 3)
            rows.setdefault(sid, []).append((index, value))
    series = []
    for sid in sorted(rows):
        entries = sorted(rows[sid])
        indices = [i for i, _ in entries]
        if indices != list(range(indices[0], indices[0] + len(indices))):
            raise NonContiguousIndex(f"series {sid!r} has gaps in its index")
        values = np.asarray([v for _, v in entries], dtype=float)
        if values.shape[0] < min_series_length(frequency):
            continue
        series.append(TimeSeries(sid, frequency, values, h))
    return series


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_features_csv(path, vectors: list[DiversityVector], methods) -> None:
    header = ["series_id"] + feature_names(methods)
    rows = [
        [v.series_id] + [repr(float(x)) for x in v.as_row()]
        for v in sorted(vectors, key=lambda v: v.series_id)
    ]
    _write_csv(path, header, rows)


def write_metrics_csv(path, errors: ErrorMatrix) -> None:
    rows = []
    for i, sid in enumerate(errors.series_ids):
        for j, mid in enumerate(errors.method_ids):
            rows.append(
                [sid, mid, repr(float(errors.mase[i, j])),
                 repr(float(errors.msis[i, j])), repr(float(errors.err[i, j]))]
            )
    _write_csv(path, ["series_id", "method_id", "mase", "msis", "err"], rows)


def write_forecasts_csv(path, forecasts: list[CombinedForecast]) -> None:
    rows = []
    for fc in sorted(forecasts, key=lambda f: f.series_id):
        for step in range(fc.point.shape[0]):
            rows.append(
                [fc.series_id, step + 1, repr(float(fc.point[step])),
                 repr(float(fc.lower[step])), repr(float(fc.upper[step]))]
            )
    _write_csv(path, ["series_id", "step", "point", "lower", "upper"], rows)


def write_weights_csv(path, forecasts: list[CombinedForecast]) -> None:
    rows = []
    for fc in sorted(forecasts, key=lambda f: f.series_id):
        for mid, w in zip(fc.method_ids, fc.weights):
            rows.append([fc.series_id, mid, repr(float(w))])
    _write_csv(path, ["series_id", "method_id", "weight"], rows)


def write_pool_forecasts_csv(path, matrices) -> None:
    rows = []
    for fm in sorted(matrices, key=lambda f: f.series_id):
        for i, mid in enumerate(fm.methods):
            for step in range(fm.horizon):
                rows.append(
                    [fm.series_id, mid, step + 1,
                     repr(float(fm.point[i, step])),
                     repr(float(fm.lower[i, step])),
                     repr(float(fm.upper[i, step]))]
                )
    _write_csv(
        path, ["series_id", "method_id", "step", "point", "lower", "upper"], rows
    )
