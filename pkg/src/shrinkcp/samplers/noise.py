"""Observation variance: SV(1) log-volatility or a single inverse-gamma scale."""
from typing import TYPE_CHECKING

import numpy as np

from ..core import NoiseState, PriorHyper
from ..distributions import (
    MIXTURE, Rng, beta_logpdf, sample_inverse_gamma, sample_mixture_indicator, slice_sample
)
from ..linalg import SymBanded, cholesky, sample_gaussian

if TYPE_CHECKING:
    from .chain import GibbsChain


def init_noise(y: np.ndarray) -> NoiseState:
    v = float(np.var(np.diff(y) / np.sqrt(2.0), ddof=1)) if y.shape[0] > 2 else 0.0
    if not v > 0:
        v = 1.0
    n = y.shape[0]
    g = np.full(n, np.log(v))
    return NoiseState(sigma2=np.exp(g), log_vol=g, r=np.full(n, 4, dtype=np.int64), mu_eps=float(np.log(v)))


def _ar1_sse(gt: np.ndarray, phi: float) -> float:
    """Stationary AR(1) quadratic form (1 - phi^2) g_0^2 + sum (g_t - phi g_{t-1})^2."""
    return float((1.0 - phi * phi) * gt[0] ** 2 + np.sum((gt[1:] - phi * gt[:-1]) ** 2))


def draw_log_vol(rng: Rng, noise: NoiseState, resid: np.ndarray, c: float) -> None:
    z = np.log(resid ** 2 + c)
    noise.r = sample_mixture_indicator(rng, z, noise.log_vol, MIXTURE)
    v = MIXTURE.variances[noise.r]
    m = MIXTURE.means[noise.r]
    phi, s2 = noise.phi_eps, noise.sigma_xi2
    n = z.shape[0]
    main = np.full(n, (1.0 + phi * phi) / s2)
    main[0] = main[-1] = 1.0 / s2
    main += 1.0 / v
    off = np.full(n - 1, -phi / s2)
    lin = (z - m - noise.mu_eps) / v
    gt = sample_gaussian(rng, cholesky(SymBanded.from_diagonals([main, off])), lin)
    noise.log_vol = gt + noise.mu_eps


def draw_sv_params(rng: Rng, noise: NoiseState, priors: PriorHyper) -> None:
    g = noise.log_vol
    n = g.shape[0]

    # mu_eps | g, phi, sigma: Gaussian with N(0, sd^2) prior
    phi, s2 = noise.phi_eps, noise.sigma_xi2
    prec = 1.0 / priors.sv_mu_prior_sd ** 2 + ((1.0 - phi * phi) + (n - 1) * (1.0 - phi) ** 2) / s2
    lin = ((1.0 - phi * phi) * g[0] + (1.0 - phi) * np.sum(g[1:] - phi * g[:-1])) / s2
    noise.mu_eps = float(lin / prec + rng.standard_normal() / np.sqrt(prec))

    gt = g - noise.mu_eps

    def log_target(x: float) -> float:
        p = 2.0 * x - 1.0
        return 0.5 * np.log1p(-p * p) - 0.5 * _ar1_sse(gt, p) / s2 + beta_logpdf(x, priors.sv_phi_beta_a, priors.sv_phi_beta_b)

    x = slice_sample(rng, log_target, 0.5 * (phi + 1.0), 0.0, 1.0)
    noise.phi_eps = 2.0 * x - 1.0

    noise.sigma_xi2 = float(sample_inverse_gamma(
        rng, priors.sv_sigma_ig_shape + 0.5 * n, priors.sv_sigma_ig_scale + 0.5 * _ar1_sse(gt, noise.phi_eps)
    ))
    noise.sigma2 = np.exp(g)


def draw_constant_variance(rng: Rng, noise: NoiseState, resid: np.ndarray, priors: PriorHyper) -> None:
    n = resid.shape[0]
    s2 = float(sample_inverse_gamma(rng, priors.noise_ig_shape + 0.5 * n,
                                    priors.noise_ig_scale + 0.5 * float(np.sum(resid ** 2))))
    noise.sigma2 = np.full(n, s2)
    noise.log_vol = np.log(noise.sigma2)
    noise.mu_eps = float(np.log(s2))


def sample_obs_sv(chain: "GibbsChain") -> None:
    state = chain.state
    resid = chain.series.values - chain.signal() - state.zeta
    if chain.config.use_sv_noise:
        draw_log_vol(chain.rng, state.noise, resid, chain.config.c_offset)
        draw_sv_params(chain.rng, state.noise, chain.config.priors)
    else:
        draw_constant_variance(chain.rng, state.noise, resid, chain.config.priors)
