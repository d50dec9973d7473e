"""Pólya-Gamma PG(1, z) variates.

The default sampler is the exact alternating-series accept/reject scheme
(Devroye-style, as in Polson, Scott and Windle).  It is vectorised over
elements: every round proposes for all still-pending entries at once and
settles them with the series test, so one call per Gibbs sweep covers all
time points.  A truncated-series sampler is kept for comparison.
"""
from typing import Any, Union

import numpy as np
from scipy.special import log_ndtr

from ..errors import BadParamError
from .rng import Rng

TRUNC = 0.64
_MAX_TERMS = 200
_HALF_PI = 0.5 * np.pi

ArrayOrFloat = Union[float, np.ndarray]


def _a_coef(n: int, x: np.ndarray) -> np.ndarray:
    k = (n + 0.5) * np.pi
    out = np.empty_like(x)
    right = x > TRUNC
    out[right] = k * np.exp(-0.5 * k * k * x[right])
    xl = x[~right]
    with np.errstate(divide="ignore"):
        out[~right] = np.exp(-1.5 * (np.log(_HALF_PI) + np.log(xl)) + np.log(k) - 2.0 * (n + 0.5) ** 2 / xl)
    return out


def _exp_branch_prob(zh: np.ndarray) -> np.ndarray:
    """Mass of the exponential piece of the proposal, p / (p + q)."""
    fz = np.pi ** 2 / 8.0 + 0.5 * zh ** 2
    root_t = np.sqrt(1.0 / TRUNC)
    b = root_t * (TRUNC * zh - 1.0)
    a = -root_t * (TRUNC * zh + 1.0)
    x0 = np.log(fz) + fz * TRUNC
    qdivp = 4.0 / np.pi * (np.exp(x0 - zh + log_ndtr(b)) + np.exp(x0 + zh + log_ndtr(a)))
    return 1.0 / (1.0 + qdivp)


def _inverse_gauss_truncated(rng: Rng, zh: np.ndarray) -> np.ndarray:
    """IG(1/zh, 1) restricted to (0, TRUNC)."""
    out = np.empty_like(zh)
    with np.errstate(divide="ignore"):
        mu = np.where(zh > 0, 1.0 / np.maximum(zh, 1e-300), np.inf)

    # Large mean: 1/X is a truncated chi(1) square, proposal from an exponential.
    idx = np.flatnonzero(mu > TRUNC)
    while idx.size:
        e1 = rng.standard_exponential(idx.size)
        e2 = rng.standard_exponential(idx.size)
        bad = e1 * e1 > 2.0 * e2 / TRUNC
        while np.any(bad):
            nb = int(bad.sum())
            e1[bad] = rng.standard_exponential(nb)
            e2[bad] = rng.standard_exponential(nb)
            bad = e1 * e1 > 2.0 * e2 / TRUNC
        x = TRUNC / (1.0 + TRUNC * e1) ** 2
        alpha = np.exp(-0.5 * zh[idx] ** 2 * x)
        ok = rng.random(idx.size) <= alpha
        out[idx[ok]] = x[ok]
        idx = idx[~ok]

    # Small mean: plain inverse-Gaussian draws until one lands below TRUNC.
    idx = np.flatnonzero(mu <= TRUNC)
    while idx.size:
        m = mu[idx]
        y = rng.standard_normal(idx.size) ** 2
        x = m + 0.5 * m * m * y - 0.5 * m * np.sqrt(4.0 * m * y + (m * y) ** 2)
        flip = rng.random(idx.size) > m / (m + x)
        x[flip] = m[flip] ** 2 / x[flip]
        ok = x < TRUNC
        out[idx[ok]] = x[ok]
        idx = idx[~ok]
    return out


def _pg1_devroye(rng: Rng, z: np.ndarray) -> np.ndarray:
    zh = 0.5 * np.abs(z)
    out = np.empty_like(zh)
    pending = np.arange(zh.size)
    while pending.size:
        zp = zh[pending]
        fz = np.pi ** 2 / 8.0 + 0.5 * zp ** 2
        use_exp = rng.random(pending.size) < _exp_branch_prob(zp)
        x = np.empty_like(zp)
        n_exp = int(use_exp.sum())
        x[use_exp] = TRUNC + rng.standard_exponential(n_exp) / fz[use_exp]
        if n_exp < pending.size:
            x[~use_exp] = _inverse_gauss_truncated(rng, zp[~use_exp])

        s = _a_coef(0, x)
        y = rng.random(pending.size) * s
        accepted = np.zeros(pending.size, dtype=bool)
        open_ = np.ones(pending.size, dtype=bool)
        for n in range(1, _MAX_TERMS):
            if not open_.any():
                break
            a_n = _a_coef(n, x[open_])
            if n % 2 == 1:
                s[open_] -= a_n
                hit = open_.copy()
                hit[open_] = y[open_] <= s[open_]
                accepted |= hit
                open_ &= ~hit
            else:
                s[open_] += a_n
                miss = open_.copy()
                miss[open_] = y[open_] > s[open_]
                open_ &= ~miss
        out[pending[accepted]] = 0.25 * x[accepted]
        pending = pending[~accepted]
    return out


def _pg1_series(rng: Rng, z: np.ndarray, trunc: int) -> np.ndarray:
    """Truncated sum-of-gammas representation with mean correction."""
    ksq = (np.arange(trunc) + 0.5) ** 2
    denom = ksq[None, :] + z[:, None] ** 2 / (4.0 * np.pi ** 2)
    g = rng.standard_exponential((z.size, trunc))
    x = 0.5 / np.pi ** 2 * np.sum(g / denom, axis=1)
    half = np.maximum(np.abs(z / 2.0), 1e-8)
    full_mean = np.tanh(half) / half / 4.0
    trunc_mean = 0.5 / np.pi ** 2 * np.sum(1.0 / denom, axis=1)
    return x * full_mean / trunc_mean


def sample_polya_gamma(rng: Rng, b: int, z: Any, method: str = "devroye", trunc: int = 200) -> ArrayOrFloat:
    """Draw PG(b, z) for b = 1, elementwise over ``z``.

    ``method="series"`` uses the truncated representation with ``trunc``
    terms (at least 200).
    """
    if b != 1:
        raise BadParamError(f"only PG(1, z) is supported, got b={b}")
    zarr = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
    if method == "devroye":
        out = _pg1_devroye(rng, zarr)
    elif method == "series":
        if trunc < 200:
            raise BadParamError(f"series truncation must be >= 200 terms, got {trunc}")
        out = _pg1_series(rng, zarr, trunc)
    else:
        raise BadParamError(f"unknown PG method {method!r}")
    if np.ndim(z) == 0:
        return float(out[0])
    return out.reshape(np.shape(z))


def pg_mean(z: Any) -> np.ndarray:
    """E[PG(1, z)] = tanh(z/2) / (2z), with the z -> 0 limit 1/4."""
    zarr = np.abs(np.asarray(z, dtype=float))
    small = zarr < 1e-6
    safe = np.where(small, 1.0, zarr)
    return np.where(small, 0.25, np.tanh(safe / 2.0) / (2.0 * safe))
