from typing import Any, Optional, Union

import numpy as np
from scipy import stats
from scipy.special import betaln

from ..errors import BadParamError, EmptyIntervalError
from .rng import Rng

ArrayOrFloat = Union[float, np.ndarray]

_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


def sample_inverse_gamma(rng: Rng, shape: Any, scale: Any, size: Optional[int] = None) -> ArrayOrFloat:
    """Density proportional to x^(-shape-1) exp(-scale/x); broadcasts over array inputs."""
    a = np.asarray(shape, dtype=float)
    b = np.asarray(scale, dtype=float)
    if np.any(~(a > 0)) or np.any(~(b > 0)):
        raise BadParamError(f"inverse-gamma needs shape > 0 and scale > 0, got shape={shape}, scale={scale}")
    draw = b / rng.gamma(a, 1.0, size=size)
    if size is None and draw.ndim == 0:
        return float(draw)
    return draw


def sample_trunc_normal(rng: Rng, mean: float, sd: float, lo: float = -np.inf, hi: float = np.inf,
                        size: Optional[int] = None) -> ArrayOrFloat:
    """N(mean, sd^2) conditioned to the open interval (lo, hi)."""
    if not lo < hi:
        raise EmptyIntervalError(f"empty interval ({lo}, {hi})")
    if not sd > 0:
        raise BadParamError(f"sd must be positive, got {sd}")
    a = (lo - mean) / sd
    b = (hi - mean) / sd
    draw = stats.truncnorm.rvs(a, b, loc=mean, scale=sd, size=size, random_state=rng)
    inner_lo = np.nextafter(lo, hi) if np.isfinite(lo) else lo
    inner_hi = np.nextafter(hi, lo) if np.isfinite(hi) else hi
    draw = np.clip(draw, inner_lo, inner_hi)
    if size is None:
        return float(draw)
    return np.asarray(draw)


def trunc_normal_mean(mean: float, sd: float, lo: float = -np.inf, hi: float = np.inf) -> float:
    return float(stats.truncnorm.mean((lo - mean) / sd, (hi - mean) / sd, loc=mean, scale=sd))


def beta_logpdf(x: float, a: float, b: float) -> float:
    if not 0.0 < x < 1.0:
        return -np.inf
    return float((a - 1.0) * np.log(x) + (b - 1.0) * np.log1p(-x) - betaln(a, b))


def normal_logpdf(x: Any, mean: Any, sd: Any) -> Any:
    z = (np.asarray(x) - mean) / sd
    return -0.5 * z * z - np.log(sd) - _LOG_SQRT_2PI
