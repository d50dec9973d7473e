import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shrinkcp.core import diff
from shrinkcp.distributions import make_rng
from shrinkcp.errors import BadParamError
from shrinkcp.scenarios import (
    SCENARIO_REGISTRY, ScenarioKind, generate, lookup, make_scenario, segment_labels, spaced_changepoints
)


def _draw(name, seed=0, t_len=None, **params):
    scenario = make_scenario(name, t_len, seed, params)
    return generate(scenario, make_rng(seed))


def test_segment_labels_start_new_segment_at_cp():
    assert list(segment_labels([3, 5], 7)) == [0, 0, 0, 1, 1, 2, 2]
    assert list(segment_labels([], 3)) == [0, 0, 0]


@pytest.mark.parametrize("name", sorted(SCENARIO_REGISTRY))
def test_every_scenario_is_deterministic_and_consistent(name):
    a_series, a_truth = _draw(name, seed=7)
    b_series, b_truth = _draw(name, seed=7)
    entry = SCENARIO_REGISTRY[name]
    t_len = entry.default_t
    assert a_series.t_len == t_len
    assert np.array_equal(a_series.values, b_series.values)
    assert a_truth.changepoints == b_truth.changepoints
    assert all(0 < k < t_len for k in a_truth.changepoints)
    assert a_truth.changepoints == sorted(set(a_truth.changepoints))
    assert np.array_equal(a_truth.segment_labels, segment_labels(a_truth.changepoints, t_len))
    assert a_truth.true_trend.shape == (t_len,)
    assert bool(a_truth.outliers) == entry.has_outliers
    c_series, _ = _draw(name, seed=8)
    assert not np.array_equal(a_series.values, c_series.values)


def test_one_cp_window():
    for seed in range(30):
        _, truth = _draw("linear-one-cp", seed=seed)
        (cp,) = truth.changepoints
        assert 25 <= cp < 75


def test_two_cp_windows():
    for seed in range(30):
        _, truth = _draw("linear-two-cp", seed=seed)
        first, second = truth.changepoints
        assert 20 <= first < 40 and 60 <= second < 80


def test_linear_segments_are_affine():
    _, truth = _draw("linear-two-cp", seed=3)
    bounds = [0, *truth.changepoints, 100]
    for a, b in zip(bounds[:-1], bounds[1:]):
        assert np.allclose(diff(truth.true_trend[a:b], 2), 0.0)


def test_quadratic_segments_fit_exactly():
    _, truth = _draw("quadratic-one-cp", seed=4)
    (cp,) = truth.changepoints
    x = np.arange(200) / 200
    for seg in (slice(0, cp), slice(cp, 200)):
        coef = np.polyfit(x[seg], truth.true_trend[seg], 2)
        assert np.allclose(np.polyval(coef, x[seg]), truth.true_trend[seg], atol=1e-8)
        assert np.allclose(coef, np.round(coef), atol=1e-6)


def test_quadratic_levels_jump_at_changepoint():
    x = np.arange(200) / 200
    for seed in range(20):
        _, truth = _draw("quadratic-one-cp", seed=seed)
        (cp,) = truth.changepoints
        left = np.polyfit(x[:cp], truth.true_trend[:cp], 2)
        assert abs(truth.true_trend[cp] - np.polyval(left, x[cp])) >= 8.0 - 1e-6


def test_quadratic_gap_out_of_reach():
    with pytest.raises(BadParamError):
        _draw("quadratic-one-cp", seed=0, coef_max=0.0)


def test_meetup_segments_are_continuous():
    for name in ("linear-meetup-small", "linear-meetup-large", "linear-meetup-mixed"):
        series, truth = _draw(name, seed=5)
        (cp,) = truth.changepoints
        assert 40 <= cp < 60
        left, right = truth.true_trend[cp - 1] - truth.true_trend[cp - 2], truth.true_trend[cp + 1] - truth.true_trend[cp]
        assert abs(right - left) >= 1.5 - 1e-9
        assert 10 <= len(truth.outliers) <= 20
        resid = series.values - truth.true_trend
        scale = {"linear-meetup-small": 5.0, "linear-meetup-large": 25.0, "linear-meetup-mixed": 5.0}[name]
        assert np.all(np.abs(resid[truth.outliers]) > scale - 5.0)


def test_mean_outlier_scenario():
    series, truth = _draw("mean-outliers", seed=6)
    (cp,) = truth.changepoints
    assert abs(cp - 375) <= 25
    assert 3 <= len(truth.outliers) <= 8
    assert np.all(truth.true_trend[:cp] <= 5.0) and np.all(truth.true_trend[cp:] >= 10.0)


def test_sv_scenarios_carry_log_variance():
    for name in ("multi-cp-sv", "mean-cp-sv"):
        _, truth = _draw(name, seed=1)
        assert truth.log_noise_var is not None and truth.log_noise_var.shape == (1000,)
        assert 2 <= len(truth.changepoints) <= 4
        assert np.min(np.diff([0, *truth.changepoints, 1000])) >= 30


@pytest.mark.slow
def test_sv_log_variance_autocorrelation():
    _, truth = _draw("multi-cp-sv", seed=2, t_len=20_000)
    g = truth.log_noise_var
    lag1 = np.corrcoef(g[:-1], g[1:])[0, 1]
    assert abs(lag1 - 0.9) < 0.03


def test_regression_scenario_structure():
    series, truth = _draw("regression-three-pred", seed=9)
    assert series.design is not None and series.design.shape == (100, 3)
    assert np.all(series.design[:, 0] == 1.0)
    first, second = truth.changepoints
    assert 25 <= first and second < 75 and second - first >= 10
    assert truth.predictor_changepoints == [[first, second], [], []]


def test_spaced_changepoints_constraints():
    rng = make_rng(12)
    for _ in range(50):
        cps = spaced_changepoints(rng, 200, 6, 15)
        gaps = np.diff([0, *cps, 200])
        assert np.all(gaps >= 15)
    assert spaced_changepoints(rng, 20, 1, 10) == [10]
    with pytest.raises(BadParamError):
        spaced_changepoints(rng, 20, 2, 10)


def test_registry_lookup_and_params():
    assert lookup("LinearOneCp").name == "linear-one-cp"
    assert lookup("LinearMeetupOutliers").name == "linear-meetup-small"
    with pytest.raises(BadParamError):
        lookup("nope")
    scenario = make_scenario("linear-one-cp", 50, 3, {"noise_hi": 1.0})
    assert scenario.kind is ScenarioKind.LINEAR_ONE_CP
    assert scenario.t_len == 50 and scenario.params["noise_hi"] == 1.0
    with pytest.raises(BadParamError):
        make_scenario("linear-one-cp", params={"bogus": 1.0})
    large = make_scenario("linear-meetup-large")
    assert large.params["outlier_lo"] == 25.0
