"""Segmentation and outlier scoring against ground truth."""
from typing import List, Optional, Sequence, Tuple

import msgspec
import numpy as np

from ..errors import BadCpsError
from ..scenarios import segment_labels


class CpMetrics(msgspec.Struct, frozen=True):
    avg_dist_to_true: Optional[float]
    diff_cp_count: int
    n_pred: int


class OutlierMetrics(msgspec.Struct, frozen=True):
    tpr: float
    fpr: float


def check_cps(cps: Sequence[int], t_len: int) -> List[int]:
    out = [int(k) for k in cps]
    if any(b <= a for a, b in zip(out, out[1:])):
        raise BadCpsError(f"changepoints must be strictly increasing, got {out}")
    if out and (out[0] < 1 or out[-1] >= t_len):
        raise BadCpsError(f"changepoints must lie in [1, {t_len}), got {out}")
    return out


def contingency(labels_a: np.ndarray, labels_b: np.ndarray) -> np.ndarray:
    _, ia = np.unique(labels_a, return_inverse=True)
    _, ib = np.unique(labels_b, return_inverse=True)
    table = np.zeros((int(ia.max()) + 1, int(ib.max()) + 1), dtype=np.int64)
    np.add.at(table, (ia, ib), 1)
    return table


def _pairs(n: np.ndarray) -> np.ndarray:
    return n * (n - 1) // 2


def _pair_counts(labels_a: np.ndarray, labels_b: np.ndarray) -> Tuple[int, int, int, int]:
    table = contingency(np.asarray(labels_a), np.asarray(labels_b))
    both = int(_pairs(table).sum())
    same_a = int(_pairs(table.sum(axis=1)).sum())
    same_b = int(_pairs(table.sum(axis=0)).sum())
    total = int(_pairs(np.array(table.sum())))
    return both, same_a, same_b, total


def rand_index_labels(labels_a: np.ndarray, labels_b: np.ndarray) -> float:
    both, same_a, same_b, total = _pair_counts(labels_a, labels_b)
    if total == 0:
        return 1.0
    # agreements = together in both + apart in both
    return (total + 2 * both - same_a - same_b) / total


def adjusted_rand_labels(labels_a: np.ndarray, labels_b: np.ndarray) -> float:
    both, same_a, same_b, total = _pair_counts(labels_a, labels_b)
    if total == 0:
        return 1.0
    expected = same_a * same_b / total
    maximum = 0.5 * (same_a + same_b)
    if maximum == expected:
        return 1.0
    return (both - expected) / (maximum - expected)


def rand_index(pred_cps: Sequence[int], true_cps: Sequence[int], t_len: int) -> float:
    return rand_index_labels(segment_labels(check_cps(pred_cps, t_len), t_len),
                             segment_labels(check_cps(true_cps, t_len), t_len))


def adjusted_rand(pred_cps: Sequence[int], true_cps: Sequence[int], t_len: int) -> float:
    return adjusted_rand_labels(segment_labels(check_cps(pred_cps, t_len), t_len),
                                segment_labels(check_cps(true_cps, t_len), t_len))


def cp_metrics(pred_cps: Sequence[int], true_cps: Sequence[int]) -> CpMetrics:
    pred = np.asarray(pred_cps, dtype=float)
    true = np.asarray(true_cps, dtype=float)
    avg: Optional[float] = None
    if pred.size and true.size:
        avg = float(np.mean(np.min(np.abs(pred[:, None] - true[None, :]), axis=1)))
    return CpMetrics(avg_dist_to_true=avg, diff_cp_count=abs(int(pred.size) - int(true.size)), n_pred=int(pred.size))


def outlier_metrics(flagged: Sequence[int], true_outliers: Sequence[int], t_len: int, slack: int = 1) -> OutlierMetrics:
    """Greedy one-to-one matching of flags to true outliers within +/- slack."""
    truth = sorted(set(int(i) for i in true_outliers))
    unmatched = set(truth)
    hits = 0
    false_flags = 0
    for f in sorted(set(int(i) for i in flagged)):
        # exact position first, then nearest
        match = next((t for t in sorted(unmatched, key=lambda t: (abs(t - f), t)) if abs(t - f) <= slack), None)
        if match is None:
            false_flags += 1
        else:
            unmatched.discard(match)
            hits += 1
    tpr = hits / len(truth) if truth else 0.0
    negatives = t_len - len(truth)
    fpr = false_flags / negatives if negatives > 0 else 0.0
    return OutlierMetrics(tpr=tpr, fpr=fpr)
