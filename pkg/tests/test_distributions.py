import os
import sys
import warnings

import numpy as np
import pytest
from scipy import stats

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shrinkcp.distributions import (
    MIXTURE, LogChiSqMixture, beta_logpdf, griddy_sample, make_rng, mixture_table, pg_mean,
    sample_inverse_gamma, sample_mixture_indicator, sample_polya_gamma, sample_trunc_normal,
    slice_sample, spawn_seeds
)
from shrinkcp.errors import AllZeroWarning, BadParamError, DegenerateSliceError, EmptyIntervalError


def test_same_seed_same_stream():
    a = make_rng(11).standard_normal(5)
    b = make_rng(11).standard_normal(5)
    c = make_rng(11, stream=1).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert spawn_seeds(3, 4) == spawn_seeds(3, 4)
    assert len(set(spawn_seeds(3, 4))) == 4


@pytest.mark.parametrize("z, expected", [(0.0, 0.25), (2.0, np.tanh(1.0) / 4.0)])
def test_polya_gamma_mean(z, expected):
    draws = sample_polya_gamma(make_rng(1), 1, np.full(100_000, z))
    assert abs(draws.mean() - expected) < 0.01
    assert np.all(draws > 0)


def test_polya_gamma_symmetric_in_z():
    pos = sample_polya_gamma(make_rng(2), 1, np.full(100_000, 5.0))
    neg = sample_polya_gamma(make_rng(3), 1, np.full(100_000, -5.0))
    assert abs(pos.mean() - neg.mean()) < 0.01


def test_polya_gamma_large_residual_and_series_method():
    draws = sample_polya_gamma(make_rng(4), 1, np.full(100_000, 10.0))
    assert abs(draws.mean() - np.tanh(5.0) / 20.0) < 0.002
    series = sample_polya_gamma(make_rng(5), 1, np.full(20_000, 2.0), method="series")
    assert abs(series.mean() - float(pg_mean(2.0))) < 0.01


def test_polya_gamma_rejects_other_shapes():
    with pytest.raises(BadParamError):
        sample_polya_gamma(make_rng(0), 2, 0.0)
    with pytest.raises(BadParamError):
        sample_polya_gamma(make_rng(0), 1, 0.0, method="series", trunc=50)
    assert isinstance(sample_polya_gamma(make_rng(0), 1, 0.5), float)


def test_inverse_gamma_moments_and_errors():
    draws = sample_inverse_gamma(make_rng(6), 3.0, 4.0, size=100_000)
    assert abs(draws.mean() - 2.0) < 0.05
    tight = sample_inverse_gamma(make_rng(7), 1e6, 1e6, size=1000)
    assert np.all(np.abs(tight - 1.0) < 0.01)
    with pytest.raises(BadParamError):
        sample_inverse_gamma(make_rng(0), 0.0, 1.0)


def test_truncated_normal():
    rng = make_rng(8)
    below = sample_trunc_normal(rng, 0.0, 1.0, hi=0.0, size=10_000)
    assert np.all(below <= 0.0)
    far = sample_trunc_normal(rng, -2.0, 0.5, hi=0.0, size=100_000)
    assert abs(far.mean() - (-2.0006)) < 0.01
    with pytest.raises(EmptyIntervalError):
        sample_trunc_normal(rng, 0.0, 1.0, lo=1.0, hi=1.0)


def test_slice_sampler_beta_mean():
    rng = make_rng(9)
    x = 0.5
    out = np.empty(20_000)
    for i in range(out.size):
        x = slice_sample(rng, lambda v: beta_logpdf(v, 10.0, 2.0), x, 0.0, 1.0)
        out[i] = x
    assert abs(out.mean() - 10.0 / 12.0) < 0.01


def test_slice_sampler_uniform_and_point_mass():
    rng = make_rng(10)
    x = 0.3
    out = np.empty(5000)
    for i in range(out.size):
        x = slice_sample(rng, lambda v: 0.0, x, 0.0, 1.0)
        out[i] = x
    assert stats.kstest(out, "uniform").statistic < 0.03

    x = 0.2
    for _ in range(50):
        x = slice_sample(rng, lambda v: -0.5 * ((v - 0.5) / 1e-12) ** 2, x, 0.0, 1.0)
    assert abs(x - 0.5) < 1e-6


def test_slice_sampler_rejects_degenerate_density():
    with pytest.raises(DegenerateSliceError):
        slice_sample(make_rng(0), lambda v: -np.inf, 0.5, 0.0, 1.0)
    with pytest.raises(BadParamError):
        slice_sample(make_rng(0), lambda v: 0.0, 0.5, 1.0, 0.0)


def test_griddy_uniform_and_gaussian():
    rng = make_rng(12)
    flat = griddy_sample(rng, lambda g: np.zeros_like(g), 2.0, 5.0, 50, size=100_000)
    assert stats.kstest(flat, "uniform", args=(2.0, 3.0)).statistic < 0.02
    gauss = griddy_sample(rng, lambda g: -0.5 * g * g, -6.0, 6.0, 150, size=100_000)
    assert abs(gauss.mean()) < 0.02
    assert abs(gauss.std() - 1.0) < 0.02


def test_griddy_errors_and_underflow():
    with pytest.raises(BadParamError):
        griddy_sample(make_rng(0), lambda g: g, 0.0, 1.0, 1)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mid = griddy_sample(make_rng(0), lambda g: np.full_like(g, -np.inf), 0.0, 2.0, 10)
    assert mid == 1.0
    assert any(issubclass(w.category, AllZeroWarning) for w in caught)


def test_mixture_table_moments():
    table = mixture_table()
    assert abs(table.weights.sum() - 1.0) < 1e-12
    assert abs(table.mean() - (-1.2704)) < 1e-3
    assert abs(table.variance() - 4.9348) < 1e-2


def test_mixture_indicator_prefers_nearest_component():
    k = 0
    z = np.full(1000, MIXTURE.means[k])
    r = sample_mixture_indicator(make_rng(13), z, np.zeros(1000))
    assert np.mean(r == k) > 0.5


def test_mixture_indicator_symmetric_table():
    table = LogChiSqMixture(weights=np.array([0.5, 0.5]), means=np.array([0.0, 0.0]), variances=np.array([1.0, 1.0]))
    r = sample_mixture_indicator(make_rng(14), np.zeros(10_000), np.zeros(10_000), table)
    assert abs(np.mean(r == 0) - 0.5) < 0.02


def test_mixture_indicator_full_support():
    z = np.full(100_000, MIXTURE.mean())
    r = sample_mixture_indicator(make_rng(15), z, np.zeros(100_000))
    assert set(np.unique(r)) == set(range(MIXTURE.n_components))
