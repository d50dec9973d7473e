"""Scaled benchmark replications with their acceptance thresholds.  Run with ``pytest -m slow``."""
import os
import sys

import msgspec
import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shrinkcp.core import ModelConfig, make_series
from shrinkcp.distributions import make_rng
from shrinkcp.engine import FitEngine
from shrinkcp.evaluation import run_benchmark
from shrinkcp.scenarios import make_scenario

pytestmark = pytest.mark.slow

CONFIG = ModelConfig(iters=4000, burn=1500, progress_every=0)


def test_linear_one_cp():
    rows = run_benchmark(make_scenario("linear-one-cp", t_len=100, seed=100), 20, ["abco"], CONFIG)
    (abco,) = rows
    assert abco.failures == 0 and abco.n_reps == 20
    assert abco.adj_rand_avg >= 0.75
    assert abco.rand_avg >= 0.88
    assert abco.n_zero_cp <= 4


def test_sv_noise_scenario_beats_horseshoe():
    rows = run_benchmark(make_scenario("multi-cp-sv", t_len=500, seed=101), 10, ["abco", "horseshoe"], CONFIG)
    abco, horseshoe = rows
    assert abco.failures == 0 and horseshoe.failures == 0
    assert abco.adj_rand_avg >= 0.70
    assert abco.adj_rand_avg > horseshoe.adj_rand_avg


def test_quadratic_trend_third_differences():
    rows = run_benchmark(make_scenario("quadratic-one-cp", t_len=200, seed=102), 10, ["abco"], CONFIG)
    (abco,) = rows
    assert abco.failures == 0
    assert abco.adj_rand_avg >= 0.90
    assert abco.n_zero_cp == 0


def test_regression_noise_predictors_stay_quiet():
    rows = run_benchmark(make_scenario("regression-three-pred", t_len=100, seed=103), 10, ["abco"], CONFIG)
    (abco,) = rows
    assert abco.failures == 0 and abco.avg_no_cp_by_predictor is not None
    by_pred = np.asarray(abco.avg_no_cp_by_predictor)
    # averages over 10 replicates back to a total count
    assert float(np.sum(by_pred[1:])) * abco.n_reps <= 1.0 + 1e-9
    # the first report is the predictor carrying the changepoints
    assert abco.adj_rand_avg >= 0.90


def test_large_outliers_on_meetup_trend():
    rows = run_benchmark(make_scenario("linear-meetup-large", t_len=100, seed=104), 10, ["abco"], CONFIG)
    (abco,) = rows
    assert abco.failures == 0
    assert abco.tpr is not None and abco.tpr >= 0.7
    assert abco.fpr is not None and abco.fpr <= 0.05
    assert abco.adj_rand_avg >= 0.80


def test_pure_noise_mostly_declares_nothing():
    empty = 0
    for rep in range(20):
        y = make_rng(200 + rep).standard_normal(200)
        config = msgspec.structs.replace(CONFIG, d=1, seed=200 + rep)
        report = FitEngine(config).run_fit(make_series(y)).report
        empty += int(report.changepoints == [])
    assert empty >= 18
