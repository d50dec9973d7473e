from .benchmark import (
    METHOD_REGISTRY, BenchmarkRow, MethodResult, ReplicateScore, aggregate, run_benchmark, run_replicate,
    score_replicate
)
from .metrics import (
    CpMetrics, OutlierMetrics, adjusted_rand, adjusted_rand_labels, check_cps, contingency, cp_metrics,
    outlier_metrics, rand_index, rand_index_labels
)
from .pelt import default_penalty, optimal_partitioning, pelt

__all__ = [
    "METHOD_REGISTRY",
    "BenchmarkRow",
    "MethodResult",
    "ReplicateScore",
    "aggregate",
    "run_benchmark",
    "run_replicate",
    "score_replicate",
    "CpMetrics",
    "OutlierMetrics",
    "adjusted_rand",
    "adjusted_rand_labels",
    "check_cps",
    "contingency",
    "cp_metrics",
    "outlier_metrics",
    "rand_index",
    "rand_index_labels",
    "default_penalty",
    "optimal_partitioning",
    "pelt",
]
