"""Posterior draws to decisions: changepoints, outliers, bands, DIC and shrinkage diagnostics."""
from typing import List, Optional, Tuple

import msgspec
import numpy as np
from scipy import integrate

from .core import ChangepointReport, InterventionSummary, ModelConfig, PosteriorDraws, TimeSeries
from .distributions import Rng, make_rng
from .errors import BadParamError, ComponentDisabledError


class TrendSummary(msgspec.Struct, frozen=True):
    mean: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    obs_lo: np.ndarray
    obs_hi: np.ndarray


class ShrinkageDiagnostics(msgspec.Struct, frozen=True):
    kappa: np.ndarray
    psi: np.ndarray


def cp_probability(draws: PosteriorDraws) -> np.ndarray:
    """Share of draws whose log(omega^2) exceeds that same draw's threshold."""
    return np.mean(draws.log_omega2 > draws.gamma[:, None], axis=0)


def window_probability(draws: PosteriorDraws, width: int) -> np.ndarray:
    """Share of draws with at least one flag among increments k..k+width-1 (windows end-truncated).

    A single break spreads over up to D adjacent D-th differences, and the threshold
    dynamics tend to flag only one of them per draw, so the per-increment probability
    can split across the run while the union stays high.
    """
    if width < 1:
        raise BadParamError(f"window width must be >= 1, got {width}")
    flags = draws.log_omega2 > draws.gamma[:, None]
    if width == 1:
        return np.mean(flags, axis=0)
    padded = np.pad(flags, ((0, 0), (0, width - 1)), constant_values=False)
    windows = np.lib.stride_tricks.sliding_window_view(padded, width, axis=1)
    return np.mean(windows.any(axis=2), axis=0)


def declare_changepoints(probs: np.ndarray, cutoff: float, min_sep: int) -> List[int]:
    """Indices above the cutoff, thinned greedily by probability to a minimum spacing."""
    p = np.asarray(probs, dtype=float)
    candidates = np.flatnonzero(p > cutoff)
    # stable sort on -p keeps the earlier index first among ties
    order = candidates[np.argsort(-p[candidates], kind="stable")]
    kept: List[int] = []
    for idx in order:
        if all(abs(int(idx) - k) >= min_sep for k in kept):
            kept.append(int(idx))
    return sorted(kept)


def outlier_scores(draws: PosteriorDraws, cutoff: float = 0.95) -> Tuple[np.ndarray, List[int]]:
    if draws.zeta_var is None:
        raise ComponentDisabledError("outlier component was disabled for this fit")
    lam2 = draws.zeta_var
    scores = np.mean(lam2 / (lam2 + draws.sigma_eps2), axis=0)
    return scores, [int(i) for i in np.flatnonzero(scores > cutoff)]


def summarize_trend(draws: PosteriorDraws, level: float = 0.95, rng: Optional[Rng] = None) -> TrendSummary:
    """Posterior mean and equal-tailed bands of beta, plus a beta + noise band without zeta."""
    rng = rng if rng is not None else make_rng(0)
    tail = 0.5 * (1.0 - level)
    beta = draws.beta
    lo, hi = np.quantile(beta, [tail, 1.0 - tail], axis=0)
    obs = beta + np.sqrt(draws.sigma_eps2) * rng.standard_normal(beta.shape)
    obs_lo, obs_hi = np.quantile(obs, [tail, 1.0 - tail], axis=0)
    mean = beta.mean(axis=0)
    # quantile interpolation and summation can disagree in the last ulp
    return TrendSummary(mean=mean, lo=np.minimum(lo, mean), hi=np.maximum(hi, mean), obs_lo=obs_lo, obs_hi=obs_hi)


def dic(draws: PosteriorDraws) -> float:
    mean_dev = float(np.mean(draws.deviance))
    return mean_dev + (mean_dev - draws.deviance_at_mean)


# exp(+-36) still leaves 1/(1 + e^x) strictly inside (0, 1) in float64
_KAPPA_CLIP = 36.0


def shrinkage_diagnostics(draws: PosteriorDraws, h_clip: float = 50.0) -> ShrinkageDiagnostics:
    """kappa_t = 1/(1 + tau^2 lambda_t^2) and psi_t = (tau^2)^(1-c_t) (tau^2 lambda_t^2)^c_t.

    Exponents are clipped to +-h_clip like the samplers clip h, so psi averages stay finite.
    """
    h = draws.h
    kappa = np.mean(1.0 / (1.0 + np.exp(np.clip(h, -_KAPPA_CLIP, _KAPPA_CLIP))), axis=0)
    s = (draws.log_omega2 > draws.gamma[:, None]).astype(float)
    cc = draws.phi1[:, None] + draws.phi2[:, None] * s
    log_psi = (1.0 - cc) * draws.mu[:, None] + cc * h
    psi = np.mean(np.exp(np.clip(log_psi, -h_clip, h_clip)), axis=0)
    return ShrinkageDiagnostics(kappa=kappa, psi=psi)


def one_step_psi(tau: float, phi1: float, phi2: float, s: int, kappa: float) -> float:
    """psi_t from one draw's parameters."""
    c = phi1 + phi2 * s
    return float((tau ** 2) ** (1.0 - c) * ((1.0 - kappa) / kappa) ** c)


def kappa_kernel(kappa: np.ndarray, psi: float, y: float) -> np.ndarray:
    """Unnormalised one-step posterior of kappa_{t+1}."""
    k = np.asarray(kappa, dtype=float)
    return (1.0 - k) ** -0.5 / (1.0 + (psi - 1.0) * k) * np.exp(-0.5 * y * y * k)


def kappa_mass_below(threshold: float, psi: float, y: float) -> float:
    """Posterior probability that kappa_{t+1} < threshold under the one-step kernel."""
    def smooth(k: float) -> float:
        return float(np.exp(-0.5 * y * y * k) / (1.0 + (psi - 1.0) * k))

    # the (1 - k)^(-1/2) factor goes into the algebraic quadrature weight
    total, _ = integrate.quad(smooth, 0.0, 1.0, weight="alg", wvar=(0.0, -0.5))
    part, _ = integrate.quad(lambda k: smooth(k) * (1.0 - k) ** -0.5, 0.0, threshold)
    return part / total


def build_report(series: TimeSeries, draws: PosteriorDraws, config: ModelConfig,
                 intervention: Optional[InterventionSummary] = None) -> ChangepointReport:
    """Assemble the report and map declared changepoints to observation indices.

    Declaration runs on window_probability with width cp_window (default D). A window
    starting at increment k covers omega_k..omega_{k+D-1}, i.e. observations k+D..k+2D-1,
    and a break whose first new-regime observation is c moves exactly the differences of
    the window starting at c-D. The earliest window at the peak is kept, and is reported
    at k + D = c. For D = 1 this is the plain per-increment rule.
    """
    probs = cp_probability(draws)
    width = config.cp_window if config.cp_window is not None else draws.d
    windowed = window_probability(draws, width)
    declared = declare_changepoints(windowed, config.cp_prob_cutoff, config.min_cp_separation)
    cps = [k + draws.d for k in declared]
    scores: Optional[np.ndarray] = None
    flags: Optional[List[int]] = None
    if draws.zeta_var is not None:
        scores, flags = outlier_scores(draws, config.outlier_cutoff)
    trend = summarize_trend(draws, 0.95, make_rng(config.seed, stream=1))
    shrink = shrinkage_diagnostics(draws, config.h_clip)
    return ChangepointReport(
        method=draws.method,
        d=draws.d,
        values=series.values,
        cp_prob=probs,
        changepoints=cps,
        outlier_scores=scores,
        flagged_outliers=flags,
        trend_mean=trend.mean,
        trend_lo95=trend.lo,
        trend_hi95=trend.hi,
        obs_lo95=trend.obs_lo,
        obs_hi95=trend.obs_hi,
        dic=dic(draws),
        kappa=shrink.kappa,
        psi=shrink.psi,
        labels=series.labels,
        predictor=draws.predictor,
        intervention=intervention,
        cp_window_prob=windowed,
    )
