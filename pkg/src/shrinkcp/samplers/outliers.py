"""Horseshoe+ additive outliers.

zeta_t ~ N(0, lam2_t), lam_t ~ C+(0, tau eta_t), eta_t ~ C+(0, s_eta),
tau ~ C+(0, s_tau), with every half-Cauchy written as a pair of inverse
gammas so each full conditional is conjugate.
"""
from typing import TYPE_CHECKING, Tuple

import numpy as np

from ..core import OutlierState, PriorHyper
from ..distributions import Rng, sample_inverse_gamma

if TYPE_CHECKING:
    from .chain import GibbsChain

MAD_TO_SD = 1.4826
_FLOOR, _CEIL = 1e-30, 1e30


def robust_noise_scale(y: np.ndarray) -> float:
    """MAD of first differences, rescaled to a noise sd (differencing doubles the variance)."""
    dy = np.diff(y)
    mad = float(np.median(np.abs(dy - np.median(dy))))
    scale = MAD_TO_SD * mad / np.sqrt(2.0)
    if scale > 0:
        return scale
    sd = float(np.std(dy) / np.sqrt(2.0))
    return sd if sd > 0 else 1.0


def outlier_scales(y: np.ndarray, priors: PriorHyper) -> Tuple[float, float]:
    return priors.outlier_global_scale * robust_noise_scale(y), priors.outlier_local_scale


def init_outliers(t_len: int) -> OutlierState:
    ones = np.ones(t_len)
    return OutlierState(zeta=np.zeros(t_len), lam2=ones.copy(), nu=ones.copy(), eta2=ones.copy(), iota=ones.copy())


def draw_zeta(rng: Rng, out: OutlierState, resid: np.ndarray, sigma2: np.ndarray) -> None:
    var = 1.0 / (1.0 / out.lam2 + 1.0 / sigma2)
    out.zeta = var * resid / sigma2 + np.sqrt(var) * rng.standard_normal(resid.shape[0])


def _ig(rng: Rng, shape: float, scale: np.ndarray) -> np.ndarray:
    # keeps every scale strictly positive and finite
    return np.clip(sample_inverse_gamma(rng, shape, np.clip(scale, _FLOOR, _CEIL)), _FLOOR, _CEIL)


def draw_scales(rng: Rng, out: OutlierState, s_tau: float, s_eta: float) -> None:
    t_len = out.zeta.shape[0]
    out.lam2 = _ig(rng, 1.0, 1.0 / out.nu + 0.5 * out.zeta ** 2)
    out.nu = _ig(rng, 1.0, 1.0 / (out.tau2 * out.eta2) + 1.0 / out.lam2)
    out.tau2 = float(_ig(rng, 0.5 * (t_len + 1), np.sum(1.0 / (out.nu * out.eta2)) + 1.0 / out.xi_aux))
    out.xi_aux = float(_ig(rng, 1.0, np.asarray(1.0 / s_tau ** 2 + 1.0 / out.tau2)))
    out.eta2 = _ig(rng, 1.0, 1.0 / out.iota + 1.0 / (out.nu * out.tau2))
    out.iota = _ig(rng, 1.0, 1.0 / s_eta ** 2 + 1.0 / out.eta2)


def sample_outliers(chain: "GibbsChain") -> None:
    state = chain.state
    out = state.outliers
    if out is None:
        return
    resid = chain.series.values - chain.signal()
    draw_zeta(chain.rng, out, resid, state.sigma_eps2)
    draw_scales(chain.rng, out, *chain.outlier_scales)
