import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shrinkcp.distributions import make_rng
from shrinkcp.errors import TooShortError
from shrinkcp.evaluation import default_penalty, optimal_partitioning, pelt


def _cost(y, cps):
    bounds = [0, *cps, len(y)]
    return sum(float(np.sum((y[a:b] - y[a:b].mean()) ** 2)) for a, b in zip(bounds[:-1], bounds[1:]))


def test_constant_series_has_no_changepoints():
    assert pelt(np.full(50, 3.0), penalty=1.0) == []
    assert pelt(np.full(50, 3.0)) == []


def test_single_step_located():
    rng = make_rng(70)
    y = np.concatenate([np.zeros(50), np.full(50, 5.0)]) + rng.standard_normal(100)
    cps = pelt(y)
    assert len(cps) == 1 and abs(cps[0] - 50) <= 2


def test_pruned_search_matches_exhaustive():
    rng = make_rng(71)
    for _ in range(60):
        t_len = int(rng.integers(6, 41))
        means = np.repeat(rng.normal(0, 3, 4), int(np.ceil(t_len / 4)))[:t_len]
        y = means + rng.standard_normal(t_len)
        pen = float(rng.uniform(0.5, 10.0))
        min_seg = int(rng.integers(1, 4))
        fast = pelt(y, pen, min_seg)
        slow = optimal_partitioning(y, pen, min_seg)
        assert _cost(y, fast) + pen * len(fast) == pytest.approx(_cost(y, slow) + pen * len(slow))
        assert fast == slow


def test_min_segment_respected():
    rng = make_rng(72)
    y = rng.standard_normal(60) * 5
    cps = pelt(y, penalty=0.1, min_seg=4)
    gaps = np.diff([0, *cps, 60])
    assert np.all(gaps >= 4)


def test_shift_invariance():
    rng = make_rng(73)
    y = np.concatenate([np.zeros(30), np.full(30, 4.0)]) + rng.standard_normal(60)
    assert pelt(y, 8.0) == pelt(y + 100.0, 8.0)


def test_too_short_rejected():
    with pytest.raises(TooShortError):
        pelt(np.ones(3), min_seg=2)
    with pytest.raises(TooShortError):
        pelt(np.ones(10), min_seg=0)


def test_default_penalty_scale():
    y = np.append(np.tile([0.0, 1.0], 50), 0.0)
    # first differences are +/-1 in equal number, so their MAD is 1
    sigma = 1.4826 / np.sqrt(2.0)
    assert default_penalty(y) == pytest.approx(2.0 * sigma ** 2 * np.log(101))
