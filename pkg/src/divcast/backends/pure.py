"""Pure-Python/NumPy reference kernels.

These mirror the compiled extension in divcast.backends._kernels_cy
operation-for-operation so both backends produce identical results. The
compiled versions exist because both kernels sit in the hottest loops of
the package: the smoothing recursion runs a few hundred times per fitted
model, and the split scan runs once per (node, feature) while boosting.
"""

from __future__ import annotations

import math

import numpy as np

# model component codes shared with the compiled kernel
ERR_ADD, ERR_MUL = 0, 1
TREND_NONE, TREND_ADD, TREND_DAMPED = 0, 1, 2
SEASON_NONE, SEASON_ADD, SEASON_MUL = 0, 1, 2

_STATE_BOUND = 1e12


def ets_filter(y, m, error, trend, season, alpha, beta, gamma, phi,
               l0, b0, s0):
    """Run the innovations state-space smoothing recursion over a series.

    Returns (ok, sse, sse_rel, sum_log_mu, level, trend_state, season_states)
    where season_states[j] is the state for phase j (time index mod m).
    ok is 0 when the recursion degenerates (non-finite or non-positive
    one-step mean under a multiplicative component).
    """
    y = np.asarray(y, dtype=float)
    t_len = y.shape[0]
    s = np.array(s0, dtype=float) if season != SEASON_NONE else np.zeros(max(m, 1))
    lvl = float(l0)
    b = float(b0)
    if trend == TREND_ADD:
        phi = 1.0
    sse = 0.0
    sse_rel = 0.0
    sum_log_mu = 0.0
    for t in range(t_len):
        q = lvl + phi * b if trend != TREND_NONE else lvl
        if season == SEASON_NONE:
            mu = q
            ds = 1.0
            dl = 1.0
        else:
            sc = s[t % m]
            if season == SEASON_ADD:
                mu = q + sc
                ds = 1.0
                dl = 1.0
            else:
                mu = q * sc
                ds = sc
                dl = q
        e = y[t] - mu
        sse += e * e
        if error == ERR_MUL:
            if mu <= 0.0 or not math.isfinite(mu):
                return 0, np.inf, np.inf, 0.0, lvl, b, s
            rel = e / mu
            sse_rel += rel * rel
            sum_log_mu += math.log(mu)
        if ds == 0.0 or dl == 0.0:
            return 0, np.inf, np.inf, 0.0, lvl, b, s
        lvl = q + alpha * e / ds
        if trend != TREND_NONE:
            b = phi * b + beta * e / ds
        if season != SEASON_NONE:
            s[t % m] = sc + gamma * e / dl
        if not math.isfinite(lvl) or abs(lvl) > _STATE_BOUND:
            return 0, np.inf, np.inf, 0.0, lvl, b, s
    if not math.isfinite(sse):
        return 0, np.inf, np.inf, 0.0, lvl, b, s
    return 1, sse, sse_rel, sum_log_mu, lvl, b, s


def best_split(xs, gs, hs, lam, min_child_hess):
    """Best exact-greedy split over pre-sorted feature columns.

    xs, gs, hs: (F, n) arrays where row f holds the node's feature-f values
    in ascending order with the gradient/hessian entries aligned. Returns
    (feature, threshold, gain); feature is -1 when no valid split exists.
    Gains are relative to the unsplit node (parent score subtracted).
    Ties keep the first candidate in scan order, lowest feature index first.
    """
    xs = np.asarray(xs, dtype=float)
    gs = np.asarray(gs, dtype=float)
    hs = np.asarray(hs, dtype=float)
    n_feat, n = xs.shape
    best_f = -1
    best_thresh = 0.0
    best_gain = 0.0
    for f in range(n_feat):
        x = xs[f]
        gl = np.cumsum(gs[f])
        hl = np.cumsum(hs[f])
        g_tot = gl[-1]
        h_tot = hl[-1]
        parent = g_tot * g_tot / (h_tot + lam)
        # candidate split after position i requires a strict value change
        valid = x[:-1] < x[1:]
        if not valid.any():
            continue
        gl = gl[:-1]
        hl = hl[:-1]
        gr = g_tot - gl
        hr = h_tot - hl
        valid &= (hl >= min_child_hess) & (hr >= min_child_hess)
        if not valid.any():
            continue
        gain = gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent
        gain = np.where(valid, gain, -np.inf)
        i = int(np.argmax(gain))
        if gain[i] > best_gain:
            best_gain = float(gain[i])
            best_thresh = 0.5 * (x[i] + x[i + 1])
            best_f = f
    return best_f, best_thresh, best_gain
