"""Evaluation harness: summary tables, rank tests, trade-off curves, plots.

Ranks use the multiple-comparisons-with-the-best procedure: average ranks
per method with simultaneous confidence intervals; two methods differ
significantly when their intervals are disjoint. Trade-off curves pair the
achieved upper coverage with the mean scaled upper interval per confidence
level, a proxy for service level versus holding cost.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import EmptyInput, MisalignedSeries, NonpositiveHistoryMean, UnsupportedK
from .metrics import scaled_upper_pi, upper_coverage

TRADEOFF_LEVELS = (0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.99)

# Upper quantiles of the studentized range (df = infinity), K = 2..20.
_Q_TABLE = {
    0.01: (3.6428, 4.1203, 4.4028, 4.6028, 4.7570, 4.8822, 4.9872, 5.0775,
           5.1566, 5.2270, 5.2902, 5.3476, 5.4001, 5.4485, 5.4933, 5.5350,
           5.5740, 5.6107, 5.6452),
    0.05: (2.7718, 3.3145, 3.6332, 3.8577, 4.0301, 4.1696, 4.2863, 4.3865,
           4.4741, 4.5519, 4.6217, 4.6849, 4.7427, 4.7959, 4.8452, 4.8910,
           4.9337, 4.9739, 5.0117),
    0.10: (2.3262, 2.9024, 3.2404, 3.4783, 3.6607, 3.8081, 3.9313, 4.0370,
           4.1293, 4.2112, 4.2846, 4.3512, 4.4119, 4.4678, 4.5195, 4.5675,
           4.6124, 4.6545, 4.6941),
}


@dataclass(frozen=True)
class MethodRanks:
    method_ids: tuple[str, ...]
    mean_ranks: np.ndarray
    half_width: float
    n_series: int

    def interval(self, method_id: str) -> tuple[float, float]:
        i = self.method_ids.index(method_id)
        r = float(self.mean_ranks[i])
        return (r - self.half_width, r + self.half_width)

    def significantly_different(self, a: str, b: str) -> bool:
        lo_a, hi_a = self.interval(a)
        lo_b, hi_b = self.interval(b)
        return hi_a < lo_b or hi_b < lo_a


@dataclass(frozen=True)
class TradeoffCurve:
    method_id: str
    levels: tuple[float, ...]
    coverage: np.ndarray
    scaled_pi: np.ndarray
    excluded: int = 0


def summarize(per_series: dict[str, dict[str, tuple[float, float]]],
              frequencies: dict[str, str] | None = None) -> list[dict]:
    """Mean MASE/MSIS per approach, per frequency and overall.

    per_series maps approach -> {series_id: (mase, msis)}. The overall row
    averages across all series, not across per-frequency means.
    """
    approaches = sorted(per_series)
    id_sets = [set(per_series[a]) for a in approaches]
    if any(s != id_sets[0] for s in id_sets[1:]):
        raise MisalignedSeries("approaches must cover the same series")
    if not id_sets or not id_sets[0]:
        raise EmptyInput("nothing to summarize")
    groups: dict[str, list[str]] = {"overall": sorted(id_sets[0])}
    if frequencies:
        for sid in sorted(id_sets[0]):
            groups.setdefault(frequencies.get(sid, "unknown"), []).append(sid)
    rows = []
    for approach in approaches:
        values = per_series[approach]
        for group, ids in groups.items():
            rows.append(
                {
                    "approach": approach,
                    "group": group,
                    "n": len(ids),
                    "mase": float(np.mean([values[i][0] for i in ids])),
                    "msis": float(np.mean([values[i][1] for i in ids])),
                }
            )
    return rows


def critical_q(k: int, alpha: float) -> float:
    key = round(alpha, 2)
    if key not in _Q_TABLE:
        raise UnsupportedK(f"no critical values tabulated for alpha={alpha}")
    if not 2 <= k <= 20:
        raise UnsupportedK(f"critical values tabulated for 2 <= K <= 20, got {k}")
    return _Q_TABLE[key][k - 2]


def mcb_test(errors, method_ids, alpha: float = 0.05) -> MethodRanks:
    """Average ranks with simultaneous intervals from the rank variance.

    errors: (N, K) array of per-series error values; lower is better.
    Ties within a series receive their average rank.
    """
    e = np.asarray(errors, dtype=float)
    if e.ndim != 2 or e.shape[0] < 2 or e.shape[1] < 2:
        raise EmptyInput("need at least 2 series and 2 methods")
    method_ids = tuple(method_ids)
    n, k = e.shape
    if len(method_ids) != k:
        raise MisalignedSeries("method ids must match error columns")
    ranks = rankdata(e, axis=1)
    mean_ranks = ranks.mean(axis=0)
    q = critical_q(k, alpha)
    half = 0.5 * q * np.sqrt(k * (k + 1) / (6.0 * n))
    return MethodRanks(method_ids, mean_ranks, float(half), n)


def tradeoff(method_id: str, per_level: dict[float, list[tuple]],
             levels=TRADEOFF_LEVELS) -> TradeoffCurve:
    """One (coverage, mean scaled upper interval) point per confidence level.

    per_level maps level -> list of (train_values, actuals, upper_bounds)
    triples, one per series. Series with a nonpositive history mean are
    excluded from the scaled-interval mean and counted.
    """
    levels = tuple(sorted(levels))
    coverage = []
    scaled = []
    excluded = 0
    for level in levels:
        entries = per_level[level]
        actuals = [a for _, a, _ in entries]
        uppers = [u for _, _, u in entries]
        coverage.append(upper_coverage(actuals, uppers))
        vals = []
        skipped = 0
        for train, _, upper in entries:
            try:
                vals.append(scaled_upper_pi(train, upper))
            except NonpositiveHistoryMean:
                skipped += 1
        excluded = max(excluded, skipped)
        if not vals:
            raise EmptyInput(f"no scalable series at level {level}")
        scaled.append(float(np.mean(vals)))
    return TradeoffCurve(
        method_id=method_id,
        levels=levels,
        coverage=np.asarray(coverage),
        scaled_pi=np.asarray(scaled),
        excluded=excluded,
    )


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_summary_csv(path, rows) -> None:
    _write_csv(
        path,
        ["approach", "group", "n", "mase", "msis"],
        [[r["approach"], r["group"], r["n"], repr(r["mase"]), repr(r["msis"])]
         for r in rows],
    )


def write_mcb_csv(path, ranks: MethodRanks) -> None:
    rows = [
        [mid, repr(float(r)), repr(float(r) - ranks.half_width),
         repr(float(r) + ranks.half_width), ranks.n_series]
        for mid, r in zip(ranks.method_ids, ranks.mean_ranks)
    ]
    _write_csv(path, ["method_id", "mean_rank", "lower", "upper", "n"], rows)


def write_tradeoff_csv(path, curves: list[TradeoffCurve]) -> None:
    rows = []
    for curve in curves:
        for level, cov, pi in zip(curve.levels, curve.coverage, curve.scaled_pi):
            rows.append(
                [curve.method_id, repr(level), repr(float(cov)), repr(float(pi)),
                 curve.excluded]
            )
    _write_csv(
        path,
        ["method_id", "level", "upper_coverage", "scaled_upper_pi", "excluded"],
        rows,
    )


def plot_mcb(path, ranks: MethodRanks, title: str = "") -> None:
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "divcast"  # stable SVG element ids
    import matplotlib.pyplot as plt

    order = np.argsort(ranks.mean_ranks)
    fig, ax = plt.subplots(figsize=(6, 0.6 * len(ranks.method_ids) + 1.5))
    for pos, i in enumerate(order):
        r = ranks.mean_ranks[i]
        ax.plot([r - ranks.half_width, r + ranks.half_width], [pos, pos], "-",
                color="tab:blue")
        ax.plot([r], [pos], "o", color="tab:blue")
    ax.set_yticks(range(len(order)))
    ax.set_yticklabels([ranks.method_ids[i] for i in order])
    ax.set_xlabel("mean rank")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_tradeoff(path, curves: list[TradeoffCurve], title: str = "") -> None:
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "divcast"  # stable SVG element ids
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5))
    for curve in curves:
        style = "-" if curve.method_id == "diversity" else "--"
        ax.plot(curve.scaled_pi, curve.coverage, style, marker=".",
                label=curve.method_id)
    ax.set_xlabel("mean scaled upper prediction interval")
    ax.set_ylabel("upper coverage")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
