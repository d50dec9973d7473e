"""Threshold stochastic-volatility block for the increment variances.

Increments are indexed ``t = 0..n-1``.  The evolution is

    h~_t = (phi1 + phi2 s_{t-1}) h~_{t-1} + eta_t,   eta_t | xi_t ~ N(0, 1/xi_t)

with ``h~ = h - mu``, ``h~_0 ~ N(0, 1/xi_0)`` and ``s_t = 1{log(omega_t^2 + c) > gamma}``.
Block functions here act on one ``EvolutionState``; the regression
extension runs them once per predictor.
"""
import warnings
from typing import TYPE_CHECKING, Any, Tuple

import numpy as np

from ..core import EvolutionState, PriorHyper, TimeSeries, diff
from ..distributions import (
    MIXTURE, Rng, beta_logpdf, griddy_sample, normal_logpdf, sample_mixture_indicator,
    sample_polya_gamma, sample_trunc_normal, slice_sample
)
from ..errors import DegenerateBoundsWarning
from ..linalg import SymBanded, cholesky, sample_gaussian

if TYPE_CHECKING:
    from .chain import GibbsChain


def log_omega2(omega: np.ndarray, c: float) -> np.ndarray:
    return np.log(omega ** 2 + c)


def threshold_flags(lw2: np.ndarray, gamma: float) -> np.ndarray:
    return (lw2 > gamma).astype(np.int64)


def ar_coefficients(evo: EvolutionState) -> np.ndarray:
    """c_t = phi1 + phi2 s_t; multiplies h~_t in the equation for h~_{t+1}."""
    return evo.phi1 + evo.phi2 * evo.s


def gamma_bounds(series: Any, d: int, c: float = 1e-8) -> Tuple[float, float]:
    """Uniform prior support for gamma: min and max of log((diff(y, d))^2 + c)."""
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float)
    lw2 = log_omega2(diff(values, d), c)
    lo, hi = float(lw2.min()), float(lw2.max())
    if not lo < hi:
        warnings.warn(f"degenerate threshold bounds at {lo:.4g}; widening by 1 on each side",
                      DegenerateBoundsWarning, stacklevel=2)
        lo, hi = lo - 1.0, hi + 1.0
    return lo, hi


def init_evolution(data_increments: np.ndarray, lw2_state: np.ndarray, bounds: Tuple[float, float],
                   anchor: float, horseshoe: bool, c: float) -> EvolutionState:
    n = lw2_state.shape[0]
    h0 = float(np.log(np.mean(data_increments ** 2) + c))
    gamma = 0.5 * (bounds[0] + bounds[1])
    return EvolutionState(
        h=np.full(n, h0),
        s=threshold_flags(lw2_state, gamma),
        r=np.full(n, 4, dtype=np.int64),
        xi=np.ones(n),
        mu=h0,
        phi1=0.0 if horseshoe else 0.9,
        phi2=0.0 if horseshoe else -1.0,
        gamma=gamma,
        gamma_lo=bounds[0],
        gamma_hi=bounds[1],
        mu_anchor=anchor,
    )


def draw_indicators(rng: Rng, evo: EvolutionState, lw2: np.ndarray) -> None:
    evo.r = sample_mixture_indicator(rng, lw2, evo.h, MIXTURE)


def h_precision(evo: EvolutionState, lw2: np.ndarray) -> Tuple[SymBanded, np.ndarray]:
    """Tridiagonal precision and linear term of the h~ conditional."""
    v = MIXTURE.variances[evo.r]
    m = MIXTURE.means[evo.r]
    cc = ar_coefficients(evo)
    xi = evo.xi
    main = 1.0 / v + xi
    main[:-1] += cc[:-1] ** 2 * xi[1:]
    off = -cc[:-1] * xi[1:]
    q = SymBanded.from_diagonals([main, off])
    lin = (lw2 - m - evo.mu) / v
    return q, lin


def draw_h(rng: Rng, evo: EvolutionState, lw2: np.ndarray) -> None:
    q, lin = h_precision(evo, lw2)
    evo.h = sample_gaussian(rng, cholesky(q), lin) + evo.mu


def mu_likelihood(evo: EvolutionState) -> Tuple[float, float]:
    """Precision and linear term that h contributes to mu (xi_0 piece included)."""
    cc = ar_coefficients(evo)
    h = evo.h
    w = (1.0 - cc[:-1]) * evo.xi[1:]
    prec = evo.xi[0] + float(np.sum((1.0 - cc[:-1]) * w))
    lin = evo.xi[0] * h[0] + float(np.sum(w * (h[1:] - cc[:-1] * h[:-1])))
    return prec, lin


def mu_precision(evo: EvolutionState) -> Tuple[float, float]:
    prec, lin = mu_likelihood(evo)
    return evo.xi_mu + prec, evo.xi_mu * evo.mu_anchor + lin


def draw_mu(rng: Rng, evo: EvolutionState) -> None:
    prec, lin = mu_precision(evo)
    evo.mu = lin / prec + rng.standard_normal() / np.sqrt(prec)
    evo.xi_mu = float(sample_polya_gamma(rng, 1, evo.mu - evo.mu_anchor))
    evo.xi[0] = float(sample_polya_gamma(rng, 1, evo.h[0] - evo.mu))


def _ar_sums(resp: np.ndarray, lag: np.ndarray, w: np.ndarray) -> Tuple[float, float, float]:
    """sum w (resp - x lag)^2 = A - 2 x B + x^2 C"""
    return float(np.sum(w * resp ** 2)), float(np.sum(w * resp * lag)), float(np.sum(w * lag ** 2))


def draw_phi1(rng: Rng, evo: EvolutionState, priors: PriorHyper) -> None:
    ht = evo.h_tilde
    resp = ht[1:] - evo.phi2 * evo.s[:-1] * ht[:-1]
    a, b, c = _ar_sums(resp, ht[:-1], evo.xi[1:])

    def log_target(x: float) -> float:
        phi = 2.0 * x - 1.0
        return -0.5 * (a - 2.0 * phi * b + phi * phi * c) + beta_logpdf(x, priors.phi1_beta_a, priors.phi1_beta_b)

    x = slice_sample(rng, log_target, 0.5 * (evo.phi1 + 1.0), 0.0, 1.0)
    evo.phi1 = 2.0 * x - 1.0


def draw_phi2(rng: Rng, evo: EvolutionState, priors: PriorHyper) -> None:
    flagged = evo.s[:-1] == 1
    if not flagged.any():
        evo.phi2 = float(sample_trunc_normal(rng, priors.phi2_mean, priors.phi2_sd, priors.phi2_lo, 0.0))
        return
    ht = evo.h_tilde
    resp = (ht[1:] - evo.phi1 * ht[:-1])[flagged]
    lag = ht[:-1][flagged]
    a, b, c = _ar_sums(resp, lag, evo.xi[1:][flagged])

    def log_target(x: float) -> float:
        return -0.5 * (a - 2.0 * x * b + x * x * c) + float(normal_logpdf(x, priors.phi2_mean, priors.phi2_sd))

    evo.phi2 = slice_sample(rng, log_target, evo.phi2, priors.phi2_lo, 0.0)


def gamma_log_conditional(evo: EvolutionState, lw2: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """log P(gamma = delta | .) up to a constant, for every delta on the grid."""
    ht = evo.h_tilde
    w = evo.xi[1:]
    e0 = -0.5 * w * (ht[1:] - evo.phi1 * ht[:-1]) ** 2
    e1 = -0.5 * w * (ht[1:] - (evo.phi1 + evo.phi2) * ht[:-1]) ** 2
    above = lw2[:-1][None, :] > grid[:, None]
    return float(e0.sum()) + (above * (e1 - e0)[None, :]).sum(axis=1)


def draw_gamma(rng: Rng, evo: EvolutionState, lw2: np.ndarray, n_grid: int) -> None:
    evo.gamma = float(griddy_sample(
        rng, lambda grid: gamma_log_conditional(evo, lw2, grid), evo.gamma_lo, evo.gamma_hi, n_grid
    ))
    evo.s = threshold_flags(lw2, evo.gamma)


def draw_xi(rng: Rng, evo: EvolutionState) -> None:
    """Refresh the PG precisions of the AR residuals (eta is their implied residual)."""
    resid = evo.eta[1:]
    if resid.size:
        evo.xi[1:] = sample_polya_gamma(rng, 1, resid)


# chain-level updates, in sweep order

def sample_indicators(chain: "GibbsChain") -> None:
    draw_indicators(chain.rng, chain.state.evo, chain.lw2)


def sample_h(chain: "GibbsChain") -> None:
    draw_h(chain.rng, chain.state.evo, chain.lw2)


def sample_mu(chain: "GibbsChain") -> None:
    draw_mu(chain.rng, chain.state.evo)


def sample_phi1(chain: "GibbsChain") -> None:
    draw_phi1(chain.rng, chain.state.evo, chain.config.priors)


def sample_phi2(chain: "GibbsChain") -> None:
    draw_phi2(chain.rng, chain.state.evo, chain.config.priors)


def sample_gamma(chain: "GibbsChain") -> None:
    draw_gamma(chain.rng, chain.state.evo, chain.lw2, chain.config.grid_size)


def sample_eta_xi(chain: "GibbsChain") -> None:
    draw_xi(chain.rng, chain.state.evo)
