"""Replicated scenario benchmarks aggregated into the columns of the comparison tables."""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import msgspec
import numpy as np

from ..core import ModelConfig, TimeSeries, diff
from ..distributions import make_rng, spawn_seeds
from ..engine import FitEngine
from ..errors import BadParamError
from ..scenarios import GroundTruth, Scenario, entry_for, generate
from .metrics import adjusted_rand, cp_metrics, outlier_metrics, rand_index
from .pelt import pelt

logger = logging.getLogger(__name__)


class MethodResult(msgspec.Struct, frozen=True):
    changepoints: List[int]
    flagged_outliers: Optional[List[int]] = None
    predictor_changepoints: Optional[List[List[int]]] = None


class ReplicateScore(msgspec.Struct, frozen=True):
    method: str
    rand: float
    adj_rand: float
    n_pred: int
    avg_dist: Optional[float]
    diff_cp: int
    tpr: Optional[float] = None
    fpr: Optional[float] = None
    predictor_cps: Optional[List[int]] = None


class BenchmarkRow(msgspec.Struct, frozen=True):
    method: str
    rand_avg: Optional[float]
    adj_rand_avg: Optional[float]
    avg_no_cp: Optional[float]
    n_zero_cp: int
    avg_dist: Optional[float]
    se: Optional[float]
    avg_diff_cp: Optional[float]
    tpr: Optional[float] = None
    fpr: Optional[float] = None
    avg_no_cp_by_predictor: Optional[List[float]] = None
    n_reps: int = 0
    failures: int = 0


Method = Callable[[TimeSeries, ModelConfig], MethodResult]


def _bayes(series: TimeSeries, config: ModelConfig) -> MethodResult:
    result = FitEngine(config).run_fit(series)
    first = result.report
    return MethodResult(
        changepoints=list(first.changepoints),
        flagged_outliers=first.flagged_outliers,
        predictor_changepoints=[list(r.changepoints) for r in result.reports] if len(result.reports) > 1 else None,
    )


def fit_abco(series: TimeSeries, config: ModelConfig) -> MethodResult:
    return _bayes(series, msgspec.structs.replace(config, horseshoe=False))


def fit_horseshoe(series: TimeSeries, config: ModelConfig) -> MethodResult:
    return _bayes(series, msgspec.structs.replace(config, horseshoe=True))


def fit_pelt(series: TimeSeries, config: ModelConfig) -> MethodResult:
    """Mean-change PELT on diff(y, d - 1); a difference index k is read as observation k."""
    z = diff(series.values, config.d - 1)
    return MethodResult(changepoints=[k for k in pelt(z) if 1 <= k < series.t_len])


METHOD_REGISTRY: Dict[str, Method] = {
    "abco": fit_abco,
    "horseshoe": fit_horseshoe,
    "pelt": fit_pelt,
}


def score_replicate(method: str, result: MethodResult, truth: GroundTruth, t_len: int,
                    has_outliers: bool) -> ReplicateScore:
    cps = sorted(k for k in result.changepoints if 1 <= k < t_len)
    cm = cp_metrics(cps, truth.changepoints)
    tpr = fpr = None
    if has_outliers and result.flagged_outliers is not None:
        om = outlier_metrics(result.flagged_outliers, truth.outliers, t_len)
        tpr, fpr = om.tpr, om.fpr
    by_pred = None
    if result.predictor_changepoints is not None:
        by_pred = [len(p) for p in result.predictor_changepoints]
    return ReplicateScore(
        method=method,
        rand=rand_index(cps, truth.changepoints, t_len),
        adj_rand=adjusted_rand(cps, truth.changepoints, t_len),
        n_pred=cm.n_pred,
        avg_dist=cm.avg_dist_to_true,
        diff_cp=cm.diff_cp_count,
        tpr=tpr,
        fpr=fpr,
        predictor_cps=by_pred,
    )


def run_replicate(scenario: Scenario, rep: int, seed: int, methods: Sequence[str], config: ModelConfig,
                  registry: Optional[Dict[str, Method]] = None) -> Tuple[int, List[ReplicateScore], List[str]]:
    """Generate one replicate and score every method on it; failures are returned, not raised."""
    registry = registry if registry is not None else METHOD_REGISTRY
    entry = entry_for(scenario)
    series, truth = generate(scenario, make_rng(seed))
    cfg = msgspec.structs.replace(config, d=entry.default_d, seed=seed)
    scores: List[ReplicateScore] = []
    failed: List[str] = []
    for name in methods:
        try:
            result = registry[name](series, cfg)
            scores.append(score_replicate(name, result, truth, series.t_len, entry.has_outliers))
        except Exception as exc:
            logger.warning("replicate %d: method %s failed: %s", rep, name, exc)
            failed.append(name)
    return rep, scores, failed


def _mean(values: Sequence[float]) -> Optional[float]:
    return float(np.mean(values)) if len(values) else None


def aggregate(method: str, scores: Sequence[ReplicateScore], failures: int = 0) -> BenchmarkRow:
    ari = np.array([s.adj_rand for s in scores])
    se = float(np.std(ari, ddof=1) / np.sqrt(ari.size)) if ari.size > 1 else (0.0 if ari.size else None)
    by_pred = None
    with_pred = [s.predictor_cps for s in scores if s.predictor_cps is not None]
    if with_pred:
        by_pred = [float(v) for v in np.mean(np.array(with_pred, dtype=float), axis=0)]
    return BenchmarkRow(
        method=method,
        rand_avg=_mean([s.rand for s in scores]),
        adj_rand_avg=_mean(list(ari)),
        avg_no_cp=_mean([s.n_pred for s in scores]),
        n_zero_cp=sum(1 for s in scores if s.n_pred == 0),
        # zero-prediction runs have no distance and are left out
        avg_dist=_mean([s.avg_dist for s in scores if s.avg_dist is not None]),
        se=se,
        avg_diff_cp=_mean([s.diff_cp for s in scores]),
        tpr=_mean([s.tpr for s in scores if s.tpr is not None]),
        fpr=_mean([s.fpr for s in scores if s.fpr is not None]),
        avg_no_cp_by_predictor=by_pred,
        n_reps=len(scores) + failures,
        failures=failures,
    )


def run_benchmark(scenario: Scenario, n_reps: int, methods: Sequence[str], config: ModelConfig,
                  jobs: Optional[int] = None, registry: Optional[Dict[str, Method]] = None) -> List[BenchmarkRow]:
    """One row per method over ``n_reps`` replicates seeded from ``scenario.seed``."""
    if n_reps < 1:
        raise BadParamError(f"n_reps must be >= 1, got {n_reps}")
    reg = registry if registry is not None else METHOD_REGISTRY
    unknown = [m for m in methods if m not in reg]
    if unknown:
        raise BadParamError(f"unknown methods: {', '.join(unknown)}")
    seeds = spawn_seeds(scenario.seed, n_reps)
    jobs = jobs or os.cpu_count() or 1

    outcomes = []
    if jobs == 1 or n_reps == 1:
        outcomes = [run_replicate(scenario, i, s, methods, config, registry) for i, s in enumerate(seeds)]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, n_reps)) as pool:
            futures = [pool.submit(run_replicate, scenario, i, s, methods, config, registry)
                       for i, s in enumerate(seeds)]
            outcomes = [f.result() for f in futures]
    outcomes.sort(key=lambda o: o[0])

    rows = []
    for name in methods:
        scores = [s for _, sc, _ in outcomes for s in sc if s.method == name]
        failures = sum(1 for _, _, failed in outcomes if name in failed)
        rows.append(aggregate(name, scores, failures))
    return rows
