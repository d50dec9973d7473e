import logging
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from ..core import diff
from ..errors import BadWeightsError, NotPositiveDefiniteError
from ..linalg import SymBanded, build_difference_precision, cholesky, sample_gaussian

if TYPE_CHECKING:
    from .chain import GibbsChain

logger = logging.getLogger(__name__)


def increment_weights(h: np.ndarray, its_positions: Optional[Tuple[int, int]] = None,
                      upsilon_var: float = 0.0) -> np.ndarray:
    """Prior precisions of the D-th differences; intervention increments get e^h + var(upsilon)."""
    weights = np.exp(-h)
    if its_positions is not None:
        idx = np.asarray(its_positions)
        weights[idx] = 1.0 / (np.exp(h[idx]) + upsilon_var)
    return weights


def trend_precision(y: np.ndarray, zeta: np.ndarray, sigma2: np.ndarray, d: int,
                    weights: np.ndarray) -> Tuple[SymBanded, np.ndarray]:
    q = build_difference_precision(y.shape[0], d, weights).add_diagonal(1.0 / sigma2)
    return q, (y - zeta) / sigma2


def sample_beta(chain: "GibbsChain") -> None:
    """Joint draw of the trend, then omega = diff(beta, D) (minus upsilon in ITS mode)."""
    state = chain.state
    y = chain.series.values
    h = state.evo.h
    pos, var_u = chain.its_positions, chain.upsilon_var
    try:
        q, lin = trend_precision(y, state.zeta, state.sigma_eps2, chain.config.d, increment_weights(h, pos, var_u))
        factor = cholesky(q)
    except (NotPositiveDefiniteError, BadWeightsError) as exc:
        logger.debug("trend precision unusable (%s); retrying with clipped h", exc)
        h = np.clip(h, -chain.config.h_clip, chain.config.h_clip)
        q, lin = trend_precision(y, state.zeta, state.sigma_eps2, chain.config.d, increment_weights(h, pos, var_u))
        factor = cholesky(q)
    state.beta = sample_gaussian(chain.rng, factor, lin)
    inc = diff(state.beta, chain.config.d)
    if pos is not None:
        idx = np.asarray(pos)
        eh = np.exp(h[idx])
        frac = var_u / (var_u + eh)
        ups = frac * inc[idx] + np.sqrt(var_u * eh / (var_u + eh)) * chain.rng.standard_normal(2)
        state.upsilon = ups
        inc[idx] -= ups
    state.omega = inc
    chain.refresh_flags()
