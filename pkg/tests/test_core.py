import os
import sys

import msgspec
import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shrinkcp.core import (
    ChangepointReport, ModelConfig, PriorHyper, decode, diff, encode, integrate, make_series, validate_config
)
from shrinkcp.errors import BadParamError, SamplerError, TooShortError, ValidationError


def test_defaults_validate():
    series = make_series(np.random.default_rng(0).standard_normal(100))
    config, out = validate_config(ModelConfig(), series)
    assert config == ModelConfig()
    assert out is series


def test_short_series_and_nan_collected_together():
    with pytest.raises(ValidationError) as info:
        validate_config(ModelConfig(d=2), make_series([1.0, np.nan, 2.0]))
    assert set(info.value.codes) == {"SeriesTooShort", "NonFinite"}


def test_bad_order_and_priors():
    series = make_series(np.arange(50.0))
    with pytest.raises(ValidationError) as info:
        validate_config(ModelConfig(d=4), series)
    assert info.value.codes == ["BadBounds"]
    bad = ModelConfig(priors=PriorHyper(z_alpha=0.3, phi1_beta_a=-1.0))
    with pytest.raises(ValidationError) as info:
        validate_config(bad, series)
    assert len(info.value.issues) == 2
    with pytest.raises(ValidationError) as info:
        validate_config(ModelConfig(cp_window=0), series)
    assert info.value.codes == ["BadBounds"]


def test_design_shape_checked():
    with pytest.raises(ValidationError) as info:
        validate_config(ModelConfig(), make_series(np.arange(20.0), design=np.ones((19, 2))))
    assert "BadDesign" in info.value.codes


def test_retained_draw_count():
    assert ModelConfig(iters=100, burn=50, thin=5).n_draws == 10
    assert ModelConfig(horseshoe=True).method == "horseshoe"


def test_unknown_config_keys_rejected():
    with pytest.raises(msgspec.ValidationError):
        msgspec.json.decode(b'{"d": 2, "iterations": 10}', type=ModelConfig)
    cfg = msgspec.json.decode(b'{"d": 1, "priors": {"phi2_sd": 0.25}}', type=ModelConfig)
    assert cfg.d == 1 and cfg.priors.phi2_sd == 0.25


def test_diff_examples():
    assert np.array_equal(diff([1, 2, 4], 1), [1, 2])
    assert np.array_equal(diff([1, 2, 4, 7], 2), [1, 1])
    assert np.array_equal(diff(np.full(6, 3.0), 3), np.zeros(3))
    assert np.array_equal(diff(np.arange(5.0), 2), diff(diff(np.arange(5.0), 1), 1))
    with pytest.raises(TooShortError):
        diff([1.0, 2.0], 2)
    with pytest.raises(BadParamError):
        diff([1.0, 2.0], -1)


def test_integrate_inverts_diff():
    y = np.random.default_rng(1).standard_normal(12).cumsum()
    for d in (1, 2, 3):
        assert np.allclose(integrate(y[:d], diff(y, d)), y)


def test_report_json_roundtrip():
    n = 6
    report = ChangepointReport(
        method="abco", d=2, values=np.linspace(0, 1, n), cp_prob=np.array([0.1, 0.9, 0.2, 0.0]),
        changepoints=[3], outlier_scores=None, flagged_outliers=None,
        trend_mean=np.zeros(n), trend_lo95=-np.ones(n), trend_hi95=np.ones(n),
        obs_lo95=-2 * np.ones(n), obs_hi95=2 * np.ones(n), dic=12.5,
        kappa=np.full(4, 0.5), psi=np.ones(4),
    )
    data = encode(report)
    back = decode(data, ChangepointReport)
    assert encode(back) == data
    assert np.array_equal(back.cp_prob, report.cp_prob)


def test_sampler_error_pickles_with_context():
    import pickle

    err = SamplerError(17, "gamma", ValueError("boom"))
    again = pickle.loads(pickle.dumps(err))
    assert again.iteration == 17 and again.step == "gamma"
    assert "iteration 17" in str(again)
