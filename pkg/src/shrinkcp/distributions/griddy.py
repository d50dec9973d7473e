import warnings
from typing import Callable, Optional, Union

import numpy as np

from ..errors import AllZeroWarning, BadParamError
from .rng import Rng

GridLogDensity = Callable[[np.ndarray], np.ndarray]


def griddy_sample(rng: Rng, log_cond: GridLogDensity, lo: float, hi: float, n_grid: int,
                  size: Optional[int] = None) -> Union[float, np.ndarray]:
    """Griddy Gibbs draw: evaluate on an even grid, invert the piecewise-linear CDF.

    ``log_cond`` receives the whole grid as an array and returns one value per
    point.  If everything underflows the midpoint is returned with an
    AllZeroWarning.
    """
    if n_grid < 2:
        raise BadParamError(f"griddy sampler needs n_grid >= 2, got {n_grid}")
    if not lo < hi:
        raise BadParamError(f"griddy bounds must satisfy lo < hi, got ({lo}, {hi})")
    grid = np.linspace(lo, hi, n_grid)
    logp = np.asarray(log_cond(grid), dtype=float)
    finite = np.isfinite(logp)
    if not finite.any():
        warnings.warn("griddy conditional underflowed at every grid point", AllZeroWarning, stacklevel=2)
        mid = 0.5 * (lo + hi)
        return mid if size is None else np.full(size, mid)

    dens = np.zeros(n_grid)
    dens[finite] = np.exp(logp[finite] - logp[finite].max())
    # trapezoid mass per cell, density linear within a cell
    cell = 0.5 * (dens[:-1] + dens[1:])
    cdf = np.concatenate(([0.0], np.cumsum(cell)))
    cdf /= cdf[-1]

    u = rng.random(size)
    draw = np.interp(u, cdf, grid)
    if size is None:
        return float(draw)
    return draw
