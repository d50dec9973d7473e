"""Symmetric positive-definite banded matrices in lower band storage.

``ab[k, j] = Q[j + k, j]`` for ``k = 0..b``; row ``k`` holds ``n - k`` live
entries followed by zero padding.  The factor uses the same layout.
"""
from dataclasses import dataclass
from math import comb, sqrt
from typing import Any, Sequence, Tuple

import numpy as np
from numba import njit

from ..distributions.rng import Rng
from ..errors import BadWeightsError, DimensionMismatchError, NotPositiveDefiniteError

PIVOT_FLOOR = 1e-300


@dataclass
class SymBanded:
    ab: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.ab.shape[1])

    @property
    def bandwidth(self) -> int:
        return int(self.ab.shape[0]) - 1

    @property
    def diagonals(self) -> list:
        return [self.ab[k, : self.dim - k].copy() for k in range(self.bandwidth + 1)]

    @classmethod
    def zeros(cls, n: int, b: int) -> "SymBanded":
        return cls(np.zeros((b + 1, n)))

    @classmethod
    def from_diagonals(cls, diagonals: Sequence[Any]) -> "SymBanded":
        n = len(diagonals[0])
        ab = np.zeros((len(diagonals), n))
        for k, diag in enumerate(diagonals):
            diag = np.asarray(diag, dtype=float)
            if diag.shape[0] != n - k:
                raise DimensionMismatchError(f"diagonal {k} has length {diag.shape[0]}, expected {n - k}")
            ab[k, : n - k] = diag
        return cls(ab)

    @classmethod
    def from_dense(cls, q: np.ndarray, b: int) -> "SymBanded":
        n = q.shape[0]
        return cls.from_diagonals([np.diagonal(q, -k) for k in range(min(b, n - 1) + 1)])

    def to_dense(self) -> np.ndarray:
        n = self.dim
        q = np.zeros((n, n))
        for k in range(min(self.bandwidth, n - 1) + 1):
            idx = np.arange(n - k)
            q[idx + k, idx] = self.ab[k, : n - k]
            q[idx, idx + k] = self.ab[k, : n - k]
        return q

    def add_diagonal(self, values: Any) -> "SymBanded":
        ab = self.ab.copy()
        ab[0] += values
        return SymBanded(ab)

    def __add__(self, other: "SymBanded") -> "SymBanded":
        if other.dim != self.dim:
            raise DimensionMismatchError(f"cannot add banded matrices of size {self.dim} and {other.dim}")
        b = max(self.bandwidth, other.bandwidth)
        ab = np.zeros((b + 1, self.dim))
        ab[: self.bandwidth + 1] += self.ab
        ab[: other.bandwidth + 1] += other.ab
        return SymBanded(ab)


@dataclass
class BandedFactor:
    """Lower Cholesky factor L with L L^T = Q, same band layout."""
    ab: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.ab.shape[1])

    @property
    def bandwidth(self) -> int:
        return int(self.ab.shape[0]) - 1

    def to_dense(self) -> np.ndarray:
        n = self.dim
        lower = np.zeros((n, n))
        for k in range(min(self.bandwidth, n - 1) + 1):
            idx = np.arange(n - k)
            lower[idx + k, idx] = self.ab[k, : n - k]
        return lower


@njit(cache=True)
def _cholesky_kernel(ab: np.ndarray) -> Tuple[np.ndarray, int]:
    b = ab.shape[0] - 1
    n = ab.shape[1]
    low = np.zeros_like(ab)
    for j in range(n):
        s = ab[0, j]
        for m in range(1, min(b, j) + 1):
            s -= low[m, j - m] ** 2
        if not s > PIVOT_FLOOR:
            return low, j
        ljj = sqrt(s)
        low[0, j] = ljj
        for i in range(1, min(b, n - 1 - j) + 1):
            s = ab[i, j]
            for k in range(max(0, j + i - b), j):
                s -= low[j + i - k, k] * low[j - k, k]
            low[i, j] = s / ljj
    return low, -1


@njit(cache=True)
def _forward_kernel(low: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    b = low.shape[0] - 1
    n = low.shape[1]
    y = np.empty(n)
    for i in range(n):
        s = rhs[i]
        for k in range(max(0, i - b), i):
            s -= low[i - k, k] * y[k]
        y[i] = s / low[0, i]
    return y


@njit(cache=True)
def _backward_kernel(low: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    b = low.shape[0] - 1
    n = low.shape[1]
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        s = rhs[i]
        for k in range(i + 1, min(n - 1, i + b) + 1):
            s -= low[k - i, i] * x[k]
        x[i] = s / low[0, i]
    return x


def cholesky(q: SymBanded) -> BandedFactor:
    low, pivot = _cholesky_kernel(np.ascontiguousarray(q.ab, dtype=np.float64))
    if pivot >= 0:
        raise NotPositiveDefiniteError(pivot)
    return BandedFactor(low)


def _check_rhs(factor: BandedFactor, rhs: Any) -> np.ndarray:
    vec = np.ascontiguousarray(rhs, dtype=np.float64)
    if vec.ndim != 1 or vec.shape[0] != factor.dim:
        raise DimensionMismatchError(f"right-hand side has shape {vec.shape}, expected ({factor.dim},)")
    return vec


def solve(factor: BandedFactor, rhs: Any) -> np.ndarray:
    """x with Q x = rhs by forward then back substitution."""
    vec = _check_rhs(factor, rhs)
    return _backward_kernel(factor.ab, _forward_kernel(factor.ab, vec))


def sample_gaussian(rng: Rng, factor: BandedFactor, l: Any) -> np.ndarray:
    """Draw from N(Q^-1 l, Q^-1) given the factor of Q."""
    vec = _check_rhs(factor, l)
    mean = _backward_kernel(factor.ab, _forward_kernel(factor.ab, vec))
    return mean + _backward_kernel(factor.ab, rng.standard_normal(factor.dim))


def difference_coefficients(d: int) -> np.ndarray:
    return np.array([(-1) ** (d - k) * comb(d, k) for k in range(d + 1)], dtype=float)


def build_difference_precision(t_len: int, d: int, weights: Any) -> SymBanded:
    """D^T diag(weights) D for the d-th difference matrix D of shape (T-d, T)."""
    w = np.asarray(weights, dtype=float)
    n = t_len - d
    if w.ndim != 1 or w.shape[0] != n:
        raise BadWeightsError(f"expected {n} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise BadWeightsError("difference weights must be finite and strictly positive")
    coef = difference_coefficients(d)
    q = SymBanded.zeros(t_len, d)
    for k1 in range(d + 1):
        for k2 in range(k1 + 1):
            q.ab[k1 - k2, k2:k2 + n] += w * coef[k1] * coef[k2]
    return q
