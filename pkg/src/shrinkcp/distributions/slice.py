import logging
from typing import Callable

import numpy as np

from ..errors import BadParamError, DegenerateSliceError
from .rng import Rng

logger = logging.getLogger(__name__)

LogDensity = Callable[[float], float]

_MAX_SHRINK = 200
_SCAN_POINTS = 64


def _finite_start(rng: Rng, log_density: LogDensity, lo: float, hi: float) -> float:
    candidates = lo + (hi - lo) * (np.arange(_SCAN_POINTS) + rng.random(_SCAN_POINTS)) / _SCAN_POINTS
    for x in candidates:
        if np.isfinite(log_density(float(x))):
            return float(x)
    raise DegenerateSliceError(f"log density is not finite anywhere on ({lo}, {hi})")


def slice_sample(rng: Rng, log_density: LogDensity, current: float, lo: float, hi: float) -> float:
    """One univariate slice transition with the interval fixed to the bracket and shrunk in.

    The returned point always satisfies ``log_density(x) >= level`` for the
    sampled slice level.
    """
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise BadParamError(f"slice bracket must be finite with lo < hi, got ({lo}, {hi})")
    x0 = float(current)
    f0 = log_density(x0) if lo < x0 < hi else -np.inf
    if not np.isfinite(f0):
        x0 = _finite_start(rng, log_density, lo, hi)
        f0 = log_density(x0)

    level = f0 - rng.standard_exponential()
    left, right = lo, hi
    for _ in range(_MAX_SHRINK):
        x = left + (right - left) * rng.random()
        if log_density(x) >= level:
            return float(x)
        if x < x0:
            left = x
        else:
            right = x
        if right - left <= 1e-15 * max(1.0, abs(x0)):
            break
    logger.debug("slice interval collapsed onto the current point %.6g", x0)
    return x0
