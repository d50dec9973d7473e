"""Interrupted time series: a known intervention index with diffuse jumps in the state equation."""
import logging
from typing import Callable, Optional, Tuple

import numpy as np

from ..core import EffectSummary, InterventionSummary, ItsConfig, ModelConfig, PosteriorDraws, TimeSeries
from ..samplers.chain import GibbsChain

logger = logging.getLogger(__name__)

HIST_BINS = 30


def summarize_effect(samples: np.ndarray, bins: int = HIST_BINS) -> EffectSummary:
    x = np.asarray(samples, dtype=float)
    p2_5, p50, p97_5 = np.percentile(x, [2.5, 50.0, 97.5])
    counts, edges = np.histogram(x, bins=bins)
    return EffectSummary(
        mean=float(x.mean()),
        sd=float(x.std(ddof=1)) if x.size > 1 else 0.0,
        p2_5=float(p2_5),
        p50=float(p50),
        p97_5=float(p97_5),
        hist_edges=[float(e) for e in edges],
        hist_counts=[int(c) for c in counts],
    )


def level_shift_draws(draws: PosteriorDraws, pi: int) -> np.ndarray:
    """beta_pi - beta_{pi-1} per draw."""
    return draws.beta[:, pi] - draws.beta[:, pi - 1]


def slope_change_draws(draws: PosteriorDraws, pi: int) -> np.ndarray:
    """(beta_{pi+1} - beta_pi) - (beta_{pi-1} - beta_{pi-2}) per draw."""
    b = draws.beta
    return (b[:, pi + 1] - b[:, pi]) - (b[:, pi - 1] - b[:, pi - 2])


def intervention_summary(draws: PosteriorDraws, pi: int, upsilon_var: float) -> InterventionSummary:
    return InterventionSummary(
        pi=pi,
        upsilon_var=upsilon_var,
        level_shift=summarize_effect(level_shift_draws(draws, pi)),
        slope_change=summarize_effect(slope_change_draws(draws, pi)),
    )


def fit_interrupted(series: TimeSeries, config: ModelConfig, its: ItsConfig,
                    on_iteration: Optional[Callable[[GibbsChain], None]] = None
                    ) -> Tuple[PosteriorDraws, InterventionSummary]:
    """Run the univariate chain with upsilon terms at increments pi and pi+1 (requires d=2)."""
    chain = GibbsChain(series, config, its=its)
    logger.info("intervention at t=%d, upsilon variance %.4g", its.pi, chain.upsilon_var)
    draws = chain.run(on_iteration)
    return draws, intervention_summary(draws, its.pi, chain.upsilon_var)
