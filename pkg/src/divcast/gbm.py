"""Gradient-boosted regression trees with a softmax-weighted error objective.

Raw per-method scores are softmax-transformed into combination weights;
the training loss is the weight-averaged per-method cost summed over
series. Each boosting round grows one depth-limited regression tree per
method by exact greedy splits on the usual second-order gain, with an L2
leaf penalty. The diagonal second derivative of this objective can be
negative, so it is floored to keep leaf denominators positive.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from . import backends as bk
from .errors import (
    DegenerateTraining,
    FeatureLengthMismatch,
    LengthMismatch,
    ModelFormatError,
)
from .seeding import derive_rng

logger = logging.getLogger(__name__)

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class GbmParams:
    rounds: int = 150
    learning_rate: float = 0.05
    max_depth: int = 6
    min_child_hessian: float = 1e-3
    row_subsample: float = 0.9
    col_subsample: float = 0.9
    l2_leaf_penalty: float = 1.0
    hessian_floor: float = 1e-6
    early_stopping_rounds: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 0:
            raise ValueError("rounds must be >= 0")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_child_hessian < 0.0:
            raise ValueError("min_child_hessian must be >= 0")
        for name in ("row_subsample", "col_subsample"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1]")
        if self.l2_leaf_penalty < 0.0:
            raise ValueError("l2_leaf_penalty must be >= 0")
        if self.hessian_floor <= 0.0:
            raise ValueError("hessian_floor must be > 0")


@dataclass(frozen=True)
class TrainingSet:
    """Aligned feature rows and per-method cost rows, one row per series."""

    X: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.X, dtype=float)
        e = np.asarray(self.E, dtype=float)
        if x.ndim != 2 or e.ndim != 2 or x.shape[0] != e.shape[0]:
            raise LengthMismatch("X and E must be 2-d with aligned rows")
        if x.shape[0] < 1 or e.shape[1] < 2:
            raise ValueError("need at least one row and two methods")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(e))):
            raise ValueError("training data contains non-finite entries")
        x.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "E", e)


@dataclass(frozen=True)
class Tree:
    """Flat node arrays; feature == -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        idx = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[idx] >= 0
        while active.any():
            rows = np.nonzero(active)[0]
            node = idx[rows]
            go_left = X[rows, self.feature[node]] <= self.threshold[node]
            idx[rows] = np.where(go_left, self.left[node], self.right[node])
            active = self.feature[idx] >= 0
        return self.value[idx]

    def to_lists(self):
        return [
            [int(f), float(t), int(l), int(r), float(v)]
            for f, t, l, r, v in zip(
                self.feature, self.threshold, self.left, self.right, self.value
            )
        ]

    @classmethod
    def from_lists(cls, nodes):
        arr = np.asarray(nodes, dtype=float).reshape(-1, 5)
        return cls(
            feature=arr[:, 0].astype(np.int64),
            threshold=arr[:, 1].copy(),
            left=arr[:, 2].astype(np.int64),
            right=arr[:, 3].astype(np.int64),
            value=arr[:, 4].copy(),
        )


@dataclass(frozen=True)
class WeightModel:
    """Immutable trained ensemble: trees[round][method]."""

    params: GbmParams
    method_ids: tuple[str, ...]
    feature_count: int
    trees: tuple[tuple[Tree, ...], ...]
    format_version: int = MODEL_FORMAT_VERSION


def softmax(scores) -> np.ndarray:
    """Max-shifted softmax; rows of 2-d input are transformed independently."""
    s = np.asarray(scores, dtype=float)
    shifted = s - s.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def loss(scores, E) -> float:
    """Sum over series of the softmax-weighted per-method costs."""
    s = np.atleast_2d(np.asarray(scores, dtype=float))
    e = np.atleast_2d(np.asarray(E, dtype=float))
    if s.shape != e.shape:
        raise LengthMismatch("scores and costs must have equal shape")
    return float(np.sum(softmax(s) * e))


def gradient_hessian(scores_n, E_n, hessian_floor: float = 1e-6):
    """Per-row gradient and floored diagonal second derivative."""
    p = softmax(np.asarray(scores_n, dtype=float))
    e = np.asarray(E_n, dtype=float)
    avg = float(p @ e)
    g = p * (e - avg)
    h = np.maximum(p * (e - avg) * (1.0 - 2.0 * p), hessian_floor)
    return g, h


def _grad_hess_matrix(scores, E, hessian_floor):
    p = softmax(scores)
    avg = np.sum(p * E, axis=1, keepdims=True)
    g = p * (E - avg)
    h = np.maximum(p * (E - avg) * (1.0 - 2.0 * p), hessian_floor)
    return g, h


def _build_tree(X, g, h, rows, cols, params: GbmParams):
    lam = params.l2_leaf_penalty
    eta = params.learning_rate
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    def grow(node_rows, depth):
        idx = new_node()
        g_sum = float(g[node_rows].sum())
        h_sum = float(h[node_rows].sum())
        value[idx] = -g_sum / (h_sum + lam) * eta
        if depth >= params.max_depth or node_rows.shape[0] < 2:
            return idx
        sub = X[np.ix_(node_rows, cols)]
        order = np.argsort(sub, axis=0, kind="stable")
        xs = np.take_along_axis(sub, order, axis=0).T
        gs = g[node_rows][order].T
        hs = h[node_rows][order].T
        f_local, thresh, gain = bk.best_split(
            xs, gs, hs, lam, params.min_child_hessian
        )
        if f_local < 0 or gain <= 0.0:
            return idx
        feat = int(cols[f_local])
        mask = X[node_rows, feat] <= thresh
        left_idx = grow(node_rows[mask], depth + 1)
        right_idx = grow(node_rows[~mask], depth + 1)
        feature[idx] = feat
        threshold[idx] = float(thresh)
        left[idx] = left_idx
        right[idx] = right_idx
        return idx

    grow(rows, 0)
    return Tree(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        value=np.asarray(value),
    )


def fit(data: TrainingSet, params: GbmParams, method_ids=None) -> WeightModel:
    """Train the boosted ensemble; deterministic for a given seed."""
    X, E = data.X, data.E
    n, n_methods = E.shape
    n_features = X.shape[1]
    if method_ids is None:
        method_ids = tuple(f"m{i + 1}" for i in range(n_methods))
    method_ids = tuple(method_ids)
    if len(method_ids) != n_methods:
        raise LengthMismatch("method_ids must match the cost matrix width")

    if params.rounds == 0:
        return WeightModel(
            params=params,
            method_ids=method_ids,
            feature_count=n_features,
            trees=(),
        )

    if np.all(E == E[:, :1]):
        raise DegenerateTraining(
            "every cost row is constant; weights are unidentifiable "
            "(use a zero-round model for uniform weights)"
        )

    scores = np.zeros((n, n_methods))
    rounds_trees: list[tuple[Tree, ...]] = []
    prev_loss = loss(scores, E)
    n_rows_sub = max(1, int(round(params.row_subsample * n)))
    n_cols_sub = max(1, int(round(params.col_subsample * n_features)))

    best_val = np.inf
    stall = 0
    for r in range(params.rounds):
        g, h = _grad_hess_matrix(scores, E, params.hessian_floor)
        round_trees = []
        for i in range(n_methods):
            rng = derive_rng(params.seed, f"round{r}", f"tree{i}")
            rows = (
                np.sort(rng.choice(n, size=n_rows_sub, replace=False))
                if n_rows_sub < n
                else np.arange(n)
            )
            cols = (
                np.sort(rng.choice(n_features, size=n_cols_sub, replace=False))
                if n_cols_sub < n_features
                else np.arange(n_features)
            )
            tree = _build_tree(X, g[:, i], h[:, i], rows, cols, params)
            scores[:, i] += tree.predict(X)
            round_trees.append(tree)
        rounds_trees.append(tuple(round_trees))
        cur_loss = loss(scores, E)
        if cur_loss > prev_loss + 1e-9:
            logger.debug(
                "training loss increased at round %d: %.6g -> %.6g",
                r, prev_loss, cur_loss,
            )
        prev_loss = cur_loss
        if params.early_stopping_rounds is not None:
            if cur_loss < best_val - 1e-12:
                best_val = cur_loss
                stall = 0
            else:
                stall += 1
                if stall >= params.early_stopping_rounds:
                    break

    return WeightModel(
        params=params,
        method_ids=method_ids,
        feature_count=n_features,
        trees=tuple(rounds_trees),
    )


def raw_scores(model: WeightModel, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.feature_count:
        raise FeatureLengthMismatch(
            f"expected {model.feature_count} features, got {X.shape[1]}"
        )
    scores = np.zeros((X.shape[0], len(model.method_ids)))
    for round_trees in model.trees:
        for i, tree in enumerate(round_trees):
            scores[:, i] += tree.predict(X)
    return scores


def predict_weights(model: WeightModel, x) -> np.ndarray:
    """Combination weights for one feature row; positive, summing to one."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise FeatureLengthMismatch("expected a single feature row")
    return softmax(raw_scores(model, x[None, :]))[0]


def predict_weights_batch(model: WeightModel, X) -> np.ndarray:
    return softmax(raw_scores(model, X))


def zero_round_model(method_ids, feature_count: int,
                     params: GbmParams | None = None) -> WeightModel:
    """An empty ensemble: predicts uniform weights everywhere."""
    params = params if params is not None else GbmParams(rounds=0)
    return WeightModel(
        params=params,
        method_ids=tuple(method_ids),
        feature_count=feature_count,
        trees=(),
    )


def save_model(model: WeightModel, path) -> None:
    payload = {
        "format_version": model.format_version,
        "params": asdict(model.params),
        "method_ids": list(model.method_ids),
        "feature_count": model.feature_count,
        "trees": [[t.to_lists() for t in round_trees] for round_trees in model.trees],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, separators=(",", ":"))
        fh.write("\n")


def load_model(path) -> WeightModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"model format_version {version!r} is not supported "
            f"(expected {MODEL_FORMAT_VERSION})"
        )
    return WeightModel(
        params=GbmParams(**payload["params"]),
        method_ids=tuple(payload["method_ids"]),
        feature_count=int(payload["feature_count"]),
        trees=tuple(
            tuple(Tree.from_lists(t) for t in round_trees)
            for round_trees in payload["trees"]
        ),
    )
