# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: smoothing recursion and boosting split scan.

Kept in lockstep with divcast.backends.pure; the pure module is the
reference implementation and documents the contracts.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, isfinite, log

cnp.import_array()

DEF ERR_MUL = 1
DEF TREND_NONE = 0
DEF TREND_ADD = 1
DEF SEASON_NONE = 0
DEF SEASON_ADD = 1

cdef double _STATE_BOUND = 1e12


def ets_filter(y, int m, int error, int trend, int season,
               double alpha, double beta, double gamma, double phi,
               double l0, double b0, s0):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s
    if season != SEASON_NONE:
        s = np.array(s0, dtype=np.float64)
    else:
        s = np.zeros(m if m > 1 else 1, dtype=np.float64)
    cdef Py_ssize_t t_len = yv.shape[0]
    cdef double lvl = l0
    cdef double b = b0
    cdef double sse = 0.0
    cdef double sse_rel = 0.0
    cdef double sum_log_mu = 0.0
    cdef double q, mu, ds, dl, e, sc, rel
    cdef Py_ssize_t t
    if trend == TREND_ADD:
        phi = 1.0
    sc = 0.0
    for t in range(t_len):
        if trend != TREND_NONE:
            q = lvl + phi * b
        else:
            q = lvl
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
        e = yv[t] - mu
        sse += e * e
        if error == ERR_MUL:
            if mu <= 0.0 or not isfinite(mu):
                return 0, np.inf, np.inf, 0.0, lvl, b, s
            rel = e / mu
            sse_rel += rel * rel
            sum_log_mu += log(mu)
        if ds == 0.0 or dl == 0.0:
            return 0, np.inf, np.inf, 0.0, lvl, b, s
        lvl = q + alpha * e / ds
        if trend != TREND_NONE:
            b = phi * b + beta * e / ds
        if season != SEASON_NONE:
            s[t % m] = sc + gamma * e / dl
        if not isfinite(lvl) or fabs(lvl) > _STATE_BOUND:
            return 0, np.inf, np.inf, 0.0, lvl, b, s
    if not isfinite(sse):
        return 0, np.inf, np.inf, 0.0, lvl, b, s
    return 1, sse, sse_rel, sum_log_mu, lvl, b, s


def best_split(xs, gs, hs, double lam, double min_child_hess):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] gv = np.ascontiguousarray(gs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] hv = np.ascontiguousarray(hs, dtype=np.float64)
    cdef Py_ssize_t n_feat = xv.shape[0]
    cdef Py_ssize_t n = xv.shape[1]
    cdef int best_f = -1
    cdef double best_thresh = 0.0
    cdef double best_gain = 0.0
    cdef double feat_gain, feat_thresh
    cdef int feat_found
    cdef double g_tot, h_tot, parent, gl, hl, gr, hr, gain
    cdef Py_ssize_t f, i
    for f in range(n_feat):
        g_tot = 0.0
        h_tot = 0.0
        for i in range(n):
            g_tot += gv[f, i]
            h_tot += hv[f, i]
        parent = g_tot * g_tot / (h_tot + lam)
        feat_found = 0
        feat_gain = 0.0
        feat_thresh = 0.0
        gl = 0.0
        hl = 0.0
        for i in range(n - 1):
            gl += gv[f, i]
            hl += hv[f, i]
            if not xv[f, i] < xv[f, i + 1]:
                continue
            if hl < min_child_hess:
                continue
            gr = g_tot - gl
            hr = h_tot - hl
            if hr < min_child_hess:
                continue
            gain = gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent
            if not feat_found or gain > feat_gain:
                feat_found = 1
                feat_gain = gain
                feat_thresh = 0.5 * (xv[f, i] + xv[f, i + 1])
        if feat_found and feat_gain > best_gain:
            best_gain = feat_gain
            best_thresh = feat_thresh
            best_f = <int>f
    return best_f, best_thresh, best_gain
