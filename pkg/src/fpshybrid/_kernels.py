"""Hot numeric kernels with numba acceleration and a pure-numpy fallback.

The fallback path is selected by setting the environment variable
``FPSHYBRID_NUMBA=0`` before import.  Both paths compute identical results;
``benchmarks/bench_kernels.py`` compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENABLED = os.environ.get("FPSHYBRID_NUMBA", "1") != "0"

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False

_NEG_INF = float("-inf")
_POS_INF = float("inf")


def _alpha_scan_py(xs: np.ndarray):
    """Scan the piecewise-quadratic objective f(a) = min_s ||x - a*s||^2.

    ``xs`` must be sorted ascending and not all-zero.  Candidate gains are the
    prefix means (negative branch) and suffix means (positive branch) that lie
    in their own sorted-entry interval; the interval bookkeeping includes the
    two unbounded end intervals so all-equal inputs are handled.

    Returns ``(alpha, f_min, n_candidates, fallback)`` where ``fallback`` is
    True when no candidate survived pruning and the endpoint gains 2*xs[0]
    and 2*xs[-1] were evaluated instead.
    """
    n = xs.size
    prefix = np.cumsum(xs)
    total = prefix[-1]
    total_sq = float(xs @ xs)

    # prefix means: first i entries selected, valid only for negative gains
    pm = prefix / np.arange(1, n + 1)
    lo = 2.0 * xs
    hi = np.empty(n)
    hi[:-1] = 2.0 * xs[1:]
    hi[-1] = _POS_INF
    pmask = (pm < 0.0) & (pm >= lo) & (pm <= hi)

    # suffix means: last n-i entries selected, valid only for positive gains
    excl = np.empty(n)
    excl[0] = 0.0
    excl[1:] = prefix[:-1]
    sm = (total - excl) / (n - np.arange(n))
    slo = np.empty(n)
    slo[0] = _NEG_INF
    slo[1:] = 2.0 * xs[:-1]
    shi = 2.0 * xs
    smask = (sm > 0.0) & (sm >= slo) & (sm <= shi)

    cands = np.concatenate([pm[pmask], sm[smask]])
    n_candidates = cands.size
    fallback = n_candidates == 0
    if fallback:
        cands = np.array([a for a in (2.0 * xs[0], 2.0 * xs[-1]) if a != 0.0])

    best_a = 0.0
    best_f = _POS_INF
    for a in cands:
        f = _eval_f_py(a, xs, prefix, total, total_sq)
        if f < best_f:
            best_f = f
            best_a = a
    return best_a, best_f, n_candidates, fallback


def _eval_f_py(alpha, xs, prefix, total, total_sq):
    n = xs.size
    if alpha > 0.0:
        j = int(np.searchsorted(xs, alpha / 2.0, side="right"))
        count = n - j
        sel_sum = total - (prefix[j - 1] if j > 0 else 0.0)
    else:
        j = int(np.searchsorted(xs, alpha / 2.0, side="left"))
        count = j
        sel_sum = prefix[j - 1] if j > 0 else 0.0
    return total_sq - 2.0 * alpha * sel_sum + alpha * alpha * count


def _cluster_outer_sums_py(gains: np.ndarray, a_rx: np.ndarray,
                           a_tx: np.ndarray) -> np.ndarray:
    """Per-cluster sums of gain-weighted rank-one ray terms.

    gains: (n_clusters, n_rays) complex; a_rx: (n_clusters, n_rays, n_rx);
    a_tx: (n_clusters, n_rays, n_tx).  Returns (n_clusters, n_rx, n_tx).
    """
    return np.einsum("il,ilr,ilt->irt", gains, a_rx, a_tx.conj())


if NUMBA_ENABLED:

    @njit(cache=True)
    def _eval_f_nb(alpha, xs, prefix, total, total_sq):  # pragma: no cover
        n = xs.size
        if alpha > 0.0:
            j = np.searchsorted(xs, alpha / 2.0, side="right")
            count = n - j
            sel_sum = total - (prefix[j - 1] if j > 0 else 0.0)
        else:
            j = np.searchsorted(xs, alpha / 2.0, side="left")
            count = j
            sel_sum = prefix[j - 1] if j > 0 else 0.0
        return total_sq - 2.0 * alpha * sel_sum + alpha * alpha * count

    @njit(cache=True)
    def _alpha_scan_nb(xs):  # pragma: no cover
        n = xs.size
        prefix = np.cumsum(xs)
        total = prefix[-1]
        total_sq = float(xs @ xs)

        best_a = 0.0
        best_f = _POS_INF
        n_candidates = 0
        for j in range(n):
            pm = prefix[j] / (j + 1)
            hi = 2.0 * xs[j + 1] if j + 1 < n else _POS_INF
            if pm < 0.0 and 2.0 * xs[j] <= pm <= hi:
                n_candidates += 1
                f = _eval_f_nb(pm, xs, prefix, total, total_sq)
                if f < best_f:
                    best_f = f
                    best_a = pm
            excl = prefix[j - 1] if j > 0 else 0.0
            sm = (total - excl) / (n - j)
            lo = 2.0 * xs[j - 1] if j > 0 else _NEG_INF
            if sm > 0.0 and lo <= sm <= 2.0 * xs[j]:
                n_candidates += 1
                f = _eval_f_nb(sm, xs, prefix, total, total_sq)
                if f < best_f:
                    best_f = f
                    best_a = sm
        fallback = n_candidates == 0
        if fallback:
            for a in (2.0 * xs[0], 2.0 * xs[-1]):
                if a != 0.0:
                    f = _eval_f_nb(a, xs, prefix, total, total_sq)
                    if f < best_f:
                        best_f = f
                        best_a = a
        return best_a, best_f, n_candidates, fallback

    @njit(cache=True)
    def _cluster_outer_sums_nb(gains, a_rx, a_tx):  # pragma: no cover
        n_cl, n_ray = gains.shape
        n_rx = a_rx.shape[2]
        n_tx = a_tx.shape[2]
        out = np.zeros((n_cl, n_rx, n_tx), dtype=np.complex128)
        for i in range(n_cl):
            for l in range(n_ray):
                g = gains[i, l]
                for r in range(n_rx):
                    gr = g * a_rx[i, l, r]
                    for t in range(n_tx):
                        out[i, r, t] += gr * np.conj(a_tx[i, l, t])
        return out

    alpha_scan = _alpha_scan_nb
    cluster_outer_sums = _cluster_outer_sums_nb
else:
    alpha_scan = _alpha_scan_py
    cluster_outer_sums = _cluster_outer_sums_py
