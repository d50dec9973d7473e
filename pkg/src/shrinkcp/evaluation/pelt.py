"""Penalised optimal partitioning with a Gaussian mean-change cost, with and without pruning."""
from typing import Any, List, Optional

import numpy as np
from numba import njit

from ..errors import TooShortError
from ..samplers.outliers import robust_noise_scale

_PRUNE_TOL = 1e-9


@njit(cache=True)
def _segment_cost(s1: np.ndarray, s2: np.ndarray, a: int, b: int) -> float:
    """Sum of squared deviations from the mean over [a, b)."""
    tot = s1[b] - s1[a]
    return (s2[b] - s2[a]) - tot * tot / (b - a)


@njit(cache=True)
def _partition_kernel(y: np.ndarray, penalty: float, min_seg: int, prune: bool) -> np.ndarray:
    n = y.shape[0]
    s1 = np.zeros(n + 1)
    s2 = np.zeros(n + 1)
    for i in range(n):
        s1[i + 1] = s1[i] + y[i]
        s2[i + 1] = s2[i] + y[i] * y[i]

    f = np.full(n + 1, np.inf)
    f[0] = -penalty
    last = np.full(n + 1, -1, dtype=np.int64)
    # candidate tau is usable at end t while t < dead_from[tau]
    dead_from = np.full(n + 1, n + 1, dtype=np.int64)
    cand = np.empty(n + 1, dtype=np.int64)
    n_cand = 0

    for t in range(min_seg, n + 1):
        new = t - min_seg
        if new == 0 or new >= min_seg:
            cand[n_cand] = new
            n_cand += 1
        best = np.inf
        arg = -1
        for i in range(n_cand):
            tau = cand[i]
            if dead_from[tau] <= t:
                continue
            c = f[tau] + _segment_cost(s1, s2, tau, t) + penalty
            if c < best:
                best = c
                arg = tau
        f[t] = best
        last[t] = arg
        if prune and np.isfinite(best):
            keep = 0
            for i in range(n_cand):
                tau = cand[i]
                if dead_from[tau] > t and f[tau] + _segment_cost(s1, s2, tau, t) > f[t] + _PRUNE_TOL * (1.0 + abs(f[t])):
                    # t only becomes a valid split for ends at least min_seg later
                    dead_from[tau] = min(dead_from[tau], t + min_seg)
                if dead_from[tau] > t + 1:
                    cand[keep] = tau
                    keep += 1
            n_cand = keep

    out = np.empty(n, dtype=np.int64)
    k = 0
    t = n
    while t > 0 and last[t] > 0:
        t = last[t]
        out[k] = t
        k += 1
    return out[:k][::-1].copy()


def default_penalty(values: Any) -> float:
    """2 sigma^2 log T with sigma from the MAD of first differences."""
    y = np.asarray(values, dtype=float)
    sigma = robust_noise_scale(y)
    return 2.0 * sigma * sigma * float(np.log(y.shape[0]))


def _prepare(values: Any, min_seg: int) -> np.ndarray:
    y = np.ascontiguousarray(values, dtype=float)
    if min_seg < 1:
        raise TooShortError(f"minimum segment length must be >= 1, got {min_seg}")
    if y.shape[0] < 2 * min_seg:
        raise TooShortError(f"need at least {2 * min_seg} values for min_seg={min_seg}, got {y.shape[0]}")
    return y


def pelt(values: Any, penalty: Optional[float] = None, min_seg: int = 2) -> List[int]:
    """Changepoints (segment start indices) of the penalised least-squares partition."""
    y = _prepare(values, min_seg)
    pen = default_penalty(y) if penalty is None else float(penalty)
    return [int(k) for k in _partition_kernel(y, pen, min_seg, True)]


def optimal_partitioning(values: Any, penalty: Optional[float] = None, min_seg: int = 2) -> List[int]:
    """Same objective as ``pelt`` searched exhaustively."""
    y = _prepare(values, min_seg)
    pen = default_penalty(y) if penalty is None else float(penalty)
    return [int(k) for k in _partition_kernel(y, pen, min_seg, False)]
