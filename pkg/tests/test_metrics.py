import itertools
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shrinkcp.distributions import make_rng
from shrinkcp.errors import BadCpsError
from shrinkcp.evaluation import adjusted_rand, cp_metrics, outlier_metrics, rand_index
from shrinkcp.evaluation.metrics import adjusted_rand_labels, contingency, rand_index_labels
from shrinkcp.scenarios import segment_labels


def brute_rand(a, b):
    agree = total = 0
    for i, j in itertools.combinations(range(len(a)), 2):
        agree += (a[i] == a[j]) == (b[i] == b[j])
        total += 1
    return agree / total


def _random_cps(rng, t_len):
    k = int(rng.integers(0, 5))
    return sorted(set(int(v) for v in rng.integers(1, t_len, size=k)))


def test_rand_index_matches_pairwise_count():
    rng = make_rng(60)
    for _ in range(200):
        t_len = int(rng.integers(2, 30))
        pred, true = _random_cps(rng, t_len), _random_cps(rng, t_len)
        expected = brute_rand(segment_labels(pred, t_len), segment_labels(true, t_len))
        assert rand_index(pred, true, t_len) == pytest.approx(expected)
        assert rand_index(pred, true, t_len) == pytest.approx(rand_index(true, pred, t_len))


def test_rand_examples():
    assert rand_index([], [2], 4) == pytest.approx(1.0 / 3.0)
    assert rand_index([3], [3], 10) == 1.0
    assert adjusted_rand([3], [3], 10) == 1.0
    assert adjusted_rand([], [], 10) == 1.0


def test_adjusted_rand_can_be_negative():
    a = np.array([0, 0, 1, 1])
    b = np.array([0, 1, 0, 1])
    assert adjusted_rand_labels(a, b) == pytest.approx(-0.5)
    assert rand_index_labels(a, b) == pytest.approx(brute_rand(a, b))


def test_adjusted_rand_near_zero_for_unrelated_segmentations():
    rng = make_rng(61)
    t_len = 400
    scores = [adjusted_rand(sorted(rng.choice(np.arange(1, t_len), 8, replace=False)),
                            sorted(rng.choice(np.arange(1, t_len), 8, replace=False)), t_len)
              for _ in range(50)]
    assert abs(np.mean(scores)) < 0.15


def test_contingency_table():
    table = contingency(np.array([0, 0, 1, 1, 1]), np.array([5, 6, 6, 6, 7]))
    assert table.tolist() == [[1, 1, 0], [0, 2, 1]]


def test_bad_changepoints_rejected():
    with pytest.raises(BadCpsError):
        rand_index([3, 3], [2], 10)
    with pytest.raises(BadCpsError):
        rand_index([5, 2], [2], 10)
    with pytest.raises(BadCpsError):
        adjusted_rand([0], [2], 10)
    with pytest.raises(BadCpsError):
        adjusted_rand([10], [2], 10)


def test_cp_metrics():
    m = cp_metrics([10, 52], [50])
    assert m.avg_dist_to_true == pytest.approx((40 + 2) / 2)
    assert m.diff_cp_count == 1 and m.n_pred == 2
    empty = cp_metrics([], [50])
    assert empty.avg_dist_to_true is None and empty.diff_cp_count == 1 and empty.n_pred == 0


def test_outlier_metrics_matching():
    om = outlier_metrics([10, 11, 40], [10, 30], 100)
    # 10 matches 10; 11 has nothing left within 1; 40 is far
    assert om.tpr == pytest.approx(0.5)
    assert om.fpr == pytest.approx(2 / 98)
    near = outlier_metrics([31], [30], 100)
    assert near.tpr == 1.0 and near.fpr == 0.0
    none = outlier_metrics([], [], 50)
    assert none.tpr == 0.0 and none.fpr == 0.0
