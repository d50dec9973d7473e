"""Seeded simulation scenarios with known segmentations.

Each generator returns a ``TimeSeries`` and a ``GroundTruth``.  A changepoint
index ``k`` means a new segment starts at observation ``k``.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import msgspec
import numpy as np

from .core import TimeSeries, make_series
from .distributions import Rng
from .errors import BadParamError

ParamMap = Dict[str, float]


class ScenarioKind(Enum):
    LINEAR_ONE_CP = "LinearOneCp"
    LINEAR_TWO_CP = "LinearTwoCp"
    MULTI_CP_SV = "MultiCpSv"
    LONG_RANDOM_CP = "LongRandomCp"
    QUADRATIC_ONE_CP = "QuadraticOneCp"
    MEAN_CP_SV = "MeanCpSv"
    MEAN_OUTLIERS = "MeanOutliers"
    LINEAR_MEETUP_OUTLIERS = "LinearMeetupOutliers"
    REGRESSION_THREE_PRED = "RegressionThreePred"


class Scenario(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    kind: ScenarioKind
    t_len: int
    seed: int = 0
    params: Dict[str, float] = msgspec.field(default_factory=dict)


class GroundTruth(msgspec.Struct, frozen=True):
    changepoints: List[int]
    segment_labels: np.ndarray
    true_trend: np.ndarray
    outliers: List[int]
    predictor_changepoints: Optional[List[List[int]]] = None
    log_noise_var: Optional[np.ndarray] = None


def segment_labels(cps: List[int], t_len: int) -> np.ndarray:
    """Label t = number of changepoints at or before t."""
    return np.searchsorted(np.asarray(sorted(cps), dtype=np.int64), np.arange(t_len), side="right")


def _truth(cps: List[int], trend: np.ndarray, outliers: Optional[List[int]] = None, **extra: object) -> GroundTruth:
    cps = sorted(int(k) for k in cps)
    return GroundTruth(
        changepoints=cps,
        segment_labels=segment_labels(cps, trend.shape[0]),
        true_trend=trend,
        outliers=sorted(int(i) for i in (outliers or [])),
        **extra,  # type: ignore[arg-type]
    )


def spaced_changepoints(rng: Rng, t_len: int, k: int, min_sep: int) -> List[int]:
    """k changepoints with every segment (edges included) at least min_sep long."""
    slack = t_len - (k + 1) * min_sep
    if slack < 0:
        raise BadParamError(f"cannot place {k} changepoints {min_sep} apart in a series of length {t_len}")
    offsets = np.sort(rng.integers(0, slack + 1, size=k))
    return [int(min_sep * (i + 1) + o) for i, o in enumerate(offsets)]


def piecewise_linear(rng: Rng, t_len: int, cps: List[int], start: float, slope: float) -> np.ndarray:
    """Independent affine segments with start ~ U[-start, start] and slope ~ U[-slope, slope]."""
    bounds = [0, *cps, t_len]
    trend = np.empty(t_len)
    for a, b in zip(bounds[:-1], bounds[1:]):
        s0 = rng.uniform(-start, start)
        m = rng.uniform(-slope, slope)
        trend[a:b] = s0 + m * np.arange(b - a)
    return trend


def piecewise_constant(means: np.ndarray, cps: List[int], t_len: int) -> np.ndarray:
    return np.asarray(means, dtype=float)[segment_labels(cps, t_len)]


def sv_noise(rng: Rng, t_len: int, phi: float, sigma_alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    """eps_t = exp(g_t / 2) z_t with g_t = phi g_{t-1} + alpha_t started from its stationary law."""
    g = np.empty(t_len)
    g[0] = rng.normal(0.0, sigma_alpha / np.sqrt(1.0 - phi * phi))
    alpha = rng.normal(0.0, sigma_alpha, size=t_len)
    for t in range(1, t_len):
        g[t] = phi * g[t - 1] + alpha[t]
    return np.exp(0.5 * g) * rng.standard_normal(t_len), g


def add_outliers(rng: Rng, y: np.ndarray, positions: np.ndarray, lo: float, hi: float, scale: float) -> None:
    sign = rng.choice([-1.0, 1.0], size=positions.shape[0])
    y[positions] += sign * rng.uniform(lo, hi, size=positions.shape[0]) * scale


_MAX_REDRAWS = 10_000


def _one_cp_window(rng: Rng, t_len: int) -> int:
    return int(rng.integers(t_len // 4, (3 * t_len) // 4))


def linear_one_cp(rng: Rng, t_len: int, p: ParamMap) -> Tuple[TimeSeries, GroundTruth]:
    cps = [_one_cp_window(rng, t_len)]
    trend = piecewise_linear(rng, t_len, cps, p["start"], p["slope_scale"] / t_len)
    sd = rng.uniform(p["noise_lo"], p["noise_hi"])
    return make_series(trend + sd * rng.standard_normal(t_len)), _truth(cps, trend)


def linear_two_cp(rng: Rng, t_len: int, p: ParamMap) -> Tuple[TimeSeries, GroundTruth]:
    cps = [
        int(rng.integers(int(0.2 * t_len), int(0.4 * t_len))),
        int(rng.integers(int(0.6 * t_len), int(0.8 * t_len))),
    ]
    trend = piecewise_linear(rng, t_len, cps, p["start"], p["slope_scale"] / t_len)
    sd = rng.uniform(p["noise_lo"], p["noise_hi"])
    return make_series(trend + sd * rng.standard_normal(t_len)), _truth(cps, trend)


def _n_cps(rng: Rng, p: ParamMap) -> int:
    return int(rng.integers(int(p["min_cps"]), int(p["max_cps"]) + 1))


def multi_cp_sv(rng: Rng, t_len: int, p: ParamMap) -> Tuple[TimeSeries, GroundTruth]:
    cps = spaced_changepoints(rng, t_len, _n_cps(rng, p), int(p["min_sep"]))
    trend = piecewise_linear(rng, t_len, cps, p["start"], p["slope_scale"] / t_len)
    eps, g = sv_noise(rng, t_len, p["phi_eps"], p["sigma_alpha"])
    return make_series(trend + eps), _truth(cps, trend, log_noise_var=g)


def long_random_cp(rng: Rng, t_len: int, p: ParamMap) -> Tuple[TimeSeries, GroundTruth]:
    cps = spaced_changepoints(rng, t_len, _n_cps(rng, p), int(p["min_sep"]))
    trend = piecewise_linear(rng, t_len, cps, p["start"], p["slope_scale"] / t_len)
    sd = rng.uniform(p["noise_lo"], p["noise_hi"])
    return make_series(trend + sd * rng.standard_normal(t_len)), _truth(cps, trend)


def quadratic_one_cp(rng: Rng, t_len: int, p: ParamMap) -> Tuple[TimeSeries, GroundTruth]:
    """Two integer-coefficient quadratics whose levels differ by at least min_gap at the changepoint."""
    cp = _one_cp_window(rng, t_len)
    x = np.arange(t_len) / t_len
    lim = int(p["coef_max"])
    left = rng.integers(-lim, lim + 1, size=3)
    at_cp = np.array([x[cp] ** 2, x[cp], 1.0])
    for _ in range(_MAX_REDRAWS):
        right = rng.integers(-lim, lim + 1, size=3)
        if abs(float(at_cp @ (right - left))) >= p["min_gap"]:
            break
    else:
        raise BadParamError(f"no quadratic pair with a level gap of {p['min_gap']} at coef_max={lim}")
    trend = np.empty(t_len)
    for (a, b), (qa, qb, qc) in zip([(0, cp), (cp, t_len)], [left, right]):
        trend[a:b] = qa * x[a:b] ** 2 + qb * x[a:b] + qc
    return make_series(trend + p["noise_sd"] * rng.standard_normal(t_len)), _truth([cp], trend)


def mean_cp_sv(rng: Rng, t_len: int, p: ParamMap) -> Tuple[TimeSeries, GroundTruth]:
    cps = spaced_changepoints(rng, t_len, _n_cps(rng, p), int(p["min_sep"]))
    trend = piecewise_constant(rng.uniform(-p["mean_range"], p["mean_range"], size=len(cps) + 1), cps, t_len)
    eps, g = sv_noise(rng, t_len, p["phi_eps"], p["sigma_alpha"])
    return make_series(trend + eps), _truth(cps, trend, log_noise_var=g)


def mean_outliers(rng: Rng, t_len: int, p: ParamMap) -> Tuple[TimeSeries, GroundTruth]:
    jitter = t_len / 20.0
    cp = int((3 * t_len) // 4 + round(rng.uniform(-jitter, jitter)))
    cps = [min(max(cp, 1), t_len - 1)]
    trend = piecewise_constant(np.array([rng.uniform(0.0, 5.0), rng.uniform(10.0, 15.0)]), cps, t_len)
    y = trend + rng.standard_t(p["df"], size=t_len)
    n_out = int(rng.integers(int(p["min_outliers"]), int(p["max_outliers"]) + 1))
    pos = np.sort(rng.choice(t_len, size=n_out, replace=False))
    add_outliers(rng, y, pos, p["outlier_lo"], p["outlier_hi"], 1.0)
    return make_series(y), _truth(cps, trend, list(pos))


def linear_meetup_outliers(rng: Rng, t_len: int, p: ParamMap) -> Tuple[TimeSeries, GroundTruth]:
    """Two continuous segments meeting at the changepoint, with outliers in each segment."""
    half = 0.1 * t_len
    cp = int(rng.integers(int(t_len / 2 - half), int(t_len / 2 + half)))
    r = p["level_range"]
    while True:
        a, b, c = rng.uniform(-r, r, size=3)
        s1 = (b - a) / cp
        s2 = (c - b) / (t_len - 1 - cp)
        if abs(s2 - s1) >= p["min_slope_gap"]:
            break
    t = np.arange(t_len)
    trend = np.where(t < cp, a + s1 * t, b + s2 * (t - cp))
    sd = p["noise_sd"]
    y = trend + sd * rng.standard_normal(t_len)
    lo_n, hi_n = int(p["min_outliers"]), int(p["max_outliers"])
    pos = np.concatenate([
        rng.choice(np.arange(0, cp), size=int(rng.integers(lo_n, hi_n + 1)), replace=False),
        rng.choice(np.arange(cp, t_len), size=int(rng.integers(lo_n, hi_n + 1)), replace=False),
    ])
    add_outliers(rng, y, pos, p["outlier_lo"], p["outlier_hi"], sd)
    return make_series(y), _truth([cp], trend, list(pos))


def regression_three_pred(rng: Rng, t_len: int, p: ParamMap) -> Tuple[TimeSeries, GroundTruth]:
    """x1 = 1 with a two-changepoint jump in its coefficient; x2, x3 noise with constant coefficients."""
    lo, hi = t_len // 4, (3 * t_len) // 4
    min_sep = int(p["min_sep"])
    cps = sorted(lo + k for k in spaced_changepoints(rng, hi - lo, 2, min_sep))
    x = np.column_stack([np.ones(t_len), rng.standard_normal((t_len, 2))])
    jump = rng.choice([-1.0, 1.0]) * rng.uniform(p["jump_lo"], p["jump_hi"])
    beta1 = np.zeros(t_len)
    beta1[cps[0]:cps[1]] = jump
    beta = np.column_stack([beta1, np.tile(rng.standard_normal(2), (t_len, 1))])
    mean = np.sum(x * beta, axis=1)
    y = mean + p["noise_sd"] * rng.standard_normal(t_len)
    series = make_series(y, design=x)
    return series, _truth(cps, mean, predictor_changepoints=[list(cps), [], []])


Generator = Callable[[Rng, int, ParamMap], Tuple[TimeSeries, GroundTruth]]

_LINEAR = {"start": 20.0, "slope_scale": 160.0, "noise_lo": 0.5, "noise_hi": 3.0}
_MEETUP = {"level_range": 100.0, "min_slope_gap": 1.5, "noise_sd": 1.0, "min_outliers": 5.0, "max_outliers": 10.0}


@dataclass(frozen=True)
class ScenarioEntry:
    name: str
    kind: ScenarioKind
    generator: Generator
    default_t: int
    default_d: int
    defaults: ParamMap = field(default_factory=dict)
    has_outliers: bool = False


SCENARIO_REGISTRY: Dict[str, ScenarioEntry] = {
    e.name: e for e in [
        ScenarioEntry("linear-one-cp", ScenarioKind.LINEAR_ONE_CP, linear_one_cp, 100, 2, dict(_LINEAR)),
        ScenarioEntry("linear-two-cp", ScenarioKind.LINEAR_TWO_CP, linear_two_cp, 100, 2, dict(_LINEAR)),
        ScenarioEntry("multi-cp-sv", ScenarioKind.MULTI_CP_SV, multi_cp_sv, 1000, 2, {
            "start": 20.0, "slope_scale": 160.0, "min_cps": 2.0, "max_cps": 4.0, "min_sep": 30.0,
            "phi_eps": 0.9, "sigma_alpha": 0.2,
        }),
        ScenarioEntry("long-random-cp", ScenarioKind.LONG_RANDOM_CP, long_random_cp, 2000, 2, {
            **_LINEAR, "min_cps": 5.0, "max_cps": 15.0, "min_sep": 10.0,
        }),
        ScenarioEntry("quadratic-one-cp", ScenarioKind.QUADRATIC_ONE_CP, quadratic_one_cp, 200, 3,
                      {"coef_max": 20.0, "noise_sd": 1.0, "min_gap": 8.0}),
        ScenarioEntry("mean-cp-sv", ScenarioKind.MEAN_CP_SV, mean_cp_sv, 1000, 1, {
            "mean_range": 100.0, "min_cps": 2.0, "max_cps": 4.0, "min_sep": 30.0, "phi_eps": 0.9, "sigma_alpha": 0.6,
        }),
        ScenarioEntry("mean-outliers", ScenarioKind.MEAN_OUTLIERS, mean_outliers, 500, 1, {
            "df": 5.0, "min_outliers": 3.0, "max_outliers": 8.0, "outlier_lo": 10.0, "outlier_hi": 30.0,
        }, has_outliers=True),
        ScenarioEntry("linear-meetup-small", ScenarioKind.LINEAR_MEETUP_OUTLIERS, linear_meetup_outliers, 100, 2,
                      {**_MEETUP, "outlier_lo": 5.0, "outlier_hi": 10.0}, has_outliers=True),
        ScenarioEntry("linear-meetup-large", ScenarioKind.LINEAR_MEETUP_OUTLIERS, linear_meetup_outliers, 100, 2,
                      {**_MEETUP, "outlier_lo": 25.0, "outlier_hi": 30.0}, has_outliers=True),
        ScenarioEntry("linear-meetup-mixed", ScenarioKind.LINEAR_MEETUP_OUTLIERS, linear_meetup_outliers, 100, 2,
                      {**_MEETUP, "outlier_lo": 5.0, "outlier_hi": 30.0}, has_outliers=True),
        ScenarioEntry("regression-three-pred", ScenarioKind.REGRESSION_THREE_PRED, regression_three_pred, 100, 1, {
            "min_sep": 10.0, "jump_lo": 5.0, "jump_hi": 10.0, "noise_sd": 1.0,
        }),
    ]
}

# the kind name resolves to its first registered variant
SCENARIO_ALIASES: Dict[str, str] = {}
for _entry in SCENARIO_REGISTRY.values():
    SCENARIO_ALIASES.setdefault(_entry.kind.value, _entry.name)


def lookup(name: str) -> ScenarioEntry:
    key = SCENARIO_ALIASES.get(name, name)
    if key not in SCENARIO_REGISTRY:
        raise BadParamError(f"unknown scenario {name!r}; choose from {', '.join(sorted(SCENARIO_REGISTRY))}")
    return SCENARIO_REGISTRY[key]


def entry_for(scenario: Scenario) -> ScenarioEntry:
    return lookup(scenario.kind.value)


def make_scenario(name: str, t_len: Optional[int] = None, seed: int = 0,
                  params: Optional[ParamMap] = None) -> Scenario:
    """Resolve a registry name and merge parameter overrides over its defaults."""
    entry = lookup(name)
    merged = dict(entry.defaults)
    for key, value in (params or {}).items():
        if key not in entry.defaults:
            raise BadParamError(f"scenario {entry.name!r} has no parameter {key!r}")
        merged[key] = float(value)
    return Scenario(kind=entry.kind, t_len=t_len or entry.default_t, seed=seed, params=merged)


def generate(scenario: Scenario, rng: Rng) -> Tuple[TimeSeries, GroundTruth]:
    entry = entry_for(scenario)
    params = {**entry.defaults, **scenario.params}
    return entry.generator(rng, scenario.t_len, params)
