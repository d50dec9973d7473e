import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shrinkcp.distributions import make_rng
from shrinkcp.errors import BadWeightsError, DimensionMismatchError, NotPositiveDefiniteError
from shrinkcp.linalg import (
    SymBanded, build_difference_precision, cholesky, difference_coefficients, sample_gaussian, solve
)


def _random_spd(rng, n: int, b: int) -> np.ndarray:
    """Diagonally dominant symmetric band matrix."""
    q = np.zeros((n, n))
    for k in range(1, min(b, n - 1) + 1):
        off = rng.uniform(-1.0, 1.0, n - k)
        q += np.diag(off, -k) + np.diag(off, k)
    q += np.diag(np.abs(q).sum(axis=1) + rng.uniform(0.5, 2.0, n))
    return q


def _tridiag(main, off) -> SymBanded:
    return SymBanded.from_diagonals([np.asarray(main, dtype=float), np.asarray(off, dtype=float)])


def test_identity_factor():
    q = SymBanded.from_diagonals([np.ones(6)])
    assert np.allclose(cholesky(q).to_dense(), np.eye(6))


def test_tridiagonal_reconstruction():
    factor = cholesky(_tridiag(np.full(4, 2.0), np.full(3, -1.0)))
    low = factor.to_dense()
    dense = 2 * np.eye(4) - np.eye(4, k=1) - np.eye(4, k=-1)
    assert np.max(np.abs(low @ low.T - dense)) < 1e-12


def test_indefinite_matrix_reports_pivot():
    with pytest.raises(NotPositiveDefiniteError) as info:
        cholesky(_tridiag(np.ones(5), np.ones(4)))
    assert info.value.pivot >= 1


def test_cholesky_and_solve_match_dense_oracle():
    rng = make_rng(20)
    for _ in range(100):
        n = int(rng.integers(1, 51))
        b = int(rng.integers(0, 7))
        dense = _random_spd(rng, n, b)
        factor = cholesky(SymBanded.from_dense(dense, b))
        low = factor.to_dense()
        assert np.max(np.abs(low @ low.T - dense)) < 1e-9 * np.max(np.abs(dense))
        assert np.allclose(low, np.linalg.cholesky(dense), atol=1e-10)
        rhs = rng.standard_normal(n)
        x = solve(factor, rhs)
        ref = np.linalg.solve(dense, rhs)
        assert np.linalg.norm(x - ref) <= 1e-9 * max(1.0, np.linalg.norm(ref))


def test_solve_identity_and_shape_check():
    factor = cholesky(SymBanded.from_diagonals([np.ones(5)]))
    rhs = np.arange(5.0)
    assert np.array_equal(solve(factor, rhs), rhs)
    with pytest.raises(DimensionMismatchError):
        solve(factor, np.ones(4))


def test_gaussian_draw_moments():
    rng = make_rng(21)
    factor = cholesky(SymBanded.from_diagonals([np.full(3, 4.0)]))
    draws = np.array([sample_gaussian(rng, factor, np.full(3, 4.0)) for _ in range(40_000)])
    assert np.all(np.abs(draws.mean(axis=0) - 1.0) < 0.02)
    assert np.all(np.abs(draws.var(axis=0) - 0.25) < 0.01)


def test_gaussian_draw_covariance_matches_inverse():
    rng = make_rng(22)
    q = _tridiag(np.full(5, 2.5), np.full(4, -1.0))
    factor = cholesky(q)
    draws = np.array([sample_gaussian(rng, factor, np.zeros(5)) for _ in range(100_000)])
    cov = np.cov(draws, rowvar=False)
    assert np.max(np.abs(cov - np.linalg.inv(q.to_dense()))) < 0.02


def test_difference_precision_first_order():
    q = build_difference_precision(3, 1, np.ones(2))
    assert np.allclose(q.diagonals[0], [1, 2, 1])
    assert np.allclose(q.diagonals[1], [-1, -1])


def test_difference_precision_matches_dense():
    rng = make_rng(23)
    for d in (1, 2, 3):
        t_len = 9
        w = rng.uniform(0.1, 3.0, t_len - d)
        dmat = np.diff(np.eye(t_len), n=d, axis=0)
        dense = dmat.T @ np.diag(w) @ dmat
        assert np.allclose(build_difference_precision(t_len, d, w).to_dense(), dense)
        assert np.allclose(build_difference_precision(t_len, d, 2 * w).to_dense(), 2 * dense)
    main = build_difference_precision(5, 2, np.ones(3)).diagonals[0]
    assert np.allclose(main, [1, 5, 6, 5, 1])
    assert np.allclose(difference_coefficients(2), [1, -2, 1])


def test_difference_precision_rejects_bad_weights():
    with pytest.raises(BadWeightsError):
        build_difference_precision(5, 1, np.ones(3))
    with pytest.raises(BadWeightsError):
        build_difference_precision(5, 1, np.array([1.0, 0.0, 1.0, 1.0]))
    with pytest.raises(BadWeightsError):
        build_difference_precision(5, 1, np.array([1.0, np.inf, 1.0, 1.0]))
