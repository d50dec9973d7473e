"""Gibbs chain orchestration: state initialisation, sweep order, retention and deviance."""
import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..core import (
    ItsConfig, LatentState, ModelConfig, PosteriorDraws, TimeSeries, diff, validate_config
)
from ..distributions import Rng, make_rng
from ..errors import Issue, SamplerError, ValidationError
from .evolution import (
    gamma_bounds, init_evolution, log_omega2, sample_eta_xi, sample_gamma, sample_h,
    sample_indicators, sample_mu, sample_phi1, sample_phi2, threshold_flags
)
from .noise import init_noise, sample_obs_sv
from .outliers import init_outliers, outlier_scales, sample_outliers
from .step_base import FunctionStep, SweepStep
from .trend import sample_beta

logger = logging.getLogger(__name__)

_LOG_2PI = float(np.log(2.0 * np.pi))


def default_steps() -> List[SweepStep]:
    """r -> h -> mu -> phi1 -> phi2 -> gamma/s -> xi -> zeta -> sigma_eps -> beta/omega"""
    shrink = lambda cfg: not cfg.horseshoe  # noqa: E731
    return [
        FunctionStep("indicators", sample_indicators),
        FunctionStep("h", sample_h),
        FunctionStep("mu", sample_mu),
        FunctionStep("phi1", sample_phi1, shrink),
        FunctionStep("phi2", sample_phi2, shrink),
        FunctionStep("gamma", sample_gamma),
        FunctionStep("xi", sample_eta_xi),
        FunctionStep("outliers", sample_outliers, lambda cfg: cfg.use_outliers),
        FunctionStep("noise", sample_obs_sv),
        FunctionStep("beta", sample_beta),
    ]


def mu_anchor(y: np.ndarray, priors_factor: float, c: float) -> float:
    """log(sd(y)^2 / T) for the tau ~ C+(0, factor * sd(y) / sqrt(T)) prior."""
    var = float(np.var(y, ddof=1))
    return float(np.log(max(var, c) * priors_factor ** 2 / y.shape[0]))


def its_setup(series: TimeSeries, config: ModelConfig, its: ItsConfig) -> Tuple[Tuple[int, int], float]:
    """Increment positions carrying upsilon and the diffuse upsilon variance."""
    issues = []
    if config.d != 2:
        issues.append(Issue("BadBounds", f"interrupted time series needs d=2, got d={config.d}"))
    if not config.d + 1 <= its.pi <= series.t_len - 2:
        issues.append(Issue("BadPi", f"intervention index {its.pi} outside [{config.d + 1}, {series.t_len - 2}]"))
    if its.upsilon_var is not None and not its.upsilon_var > 0:
        issues.append(Issue("BadBounds", "upsilon_var must be positive"))
    if issues:
        raise ValidationError(issues)
    var_u = its.upsilon_var
    if var_u is None:
        var_u = 100.0 * float(np.var(diff(series.values, 2), ddof=1))
        if not var_u > 0:
            var_u = 1.0
    return (its.pi - config.d, its.pi - config.d + 1), var_u


def init_state(series: TimeSeries, config: ModelConfig, rng: Optional[Rng] = None,
               its: Optional[ItsConfig] = None) -> LatentState:
    y = series.values
    c = config.c_offset
    beta = y.copy()
    omega = diff(beta, config.d)
    evo = init_evolution(
        diff(y, config.d), log_omega2(omega, c), gamma_bounds(y, config.d, c),
        mu_anchor(y, config.priors.tau_scale_factor, c), config.horseshoe, c,
    )
    return LatentState(
        beta=beta,
        omega=omega,
        evo=evo,
        noise=init_noise(y),
        outliers=init_outliers(y.shape[0]) if config.use_outliers else None,
        upsilon=np.zeros(2) if its is not None else None,
    )


class GibbsChain:
    """One sequential Gibbs chain over a univariate series."""

    def __init__(self, series: TimeSeries, config: ModelConfig, rng: Optional[Rng] = None,
                 its: Optional[ItsConfig] = None, steps: Optional[List[SweepStep]] = None):
        validate_config(config, series)
        self.series = series
        self.config = config
        self.rng = rng if rng is not None else make_rng(config.seed)
        self.its = its
        self.its_positions: Optional[Tuple[int, int]] = None
        self.upsilon_var = 0.0
        if its is not None:
            self.its_positions, self.upsilon_var = its_setup(series, config, its)
        self.outlier_scales = outlier_scales(series.values, config.priors)
        self.state = self.init_state()
        self.steps = [s for s in (steps if steps is not None else default_steps()) if s.enabled(config)]
        self.iteration = 0
        self._store: Dict[str, List[Any]] = {}

    def init_state(self) -> LatentState:
        return init_state(self.series, self.config, self.rng, self.its)

    @property
    def lw2(self) -> np.ndarray:
        return log_omega2(self.state.omega, self.config.c_offset)

    def refresh_flags(self) -> None:
        self.state.evo.s = threshold_flags(self.lw2, self.state.evo.gamma)

    def signal(self) -> np.ndarray:
        return self.state.beta

    def deviance(self, signal: np.ndarray, zeta: np.ndarray, sigma2: np.ndarray) -> float:
        """-2 sum log N(y_t; signal_t + zeta_t, sigma2_t)"""
        resid = self.series.values - signal - zeta
        return float(np.sum(_LOG_2PI + np.log(sigma2) + resid ** 2 / sigma2))

    def sweep(self) -> None:
        for step in self.steps:
            try:
                step.update(self)
            except Exception as exc:
                raise SamplerError(self.iteration, step.name, exc) from exc
        self.iteration += 1

    def retained(self) -> bool:
        cfg = self.config
        return self.iteration > cfg.burn and (self.iteration - cfg.burn) % cfg.thin == 0

    def _append(self, key: str, value: Any) -> None:
        self._store.setdefault(key, []).append(np.copy(value))

    def record(self) -> None:
        st = self.state
        evo = st.evo
        self._append("beta", st.beta)
        self._append("log_omega2", self.lw2)
        self._append("h", evo.h)
        self._append("gamma", evo.gamma)
        self._append("zeta", st.zeta)
        if st.outliers is not None:
            self._append("zeta_var", st.outliers.lam2)
        self._append("sigma_eps2", st.sigma_eps2)
        self._append("mu", evo.mu)
        self._append("phi1", evo.phi1)
        self._append("phi2", evo.phi2)
        self._append("tau2", np.exp(evo.mu))
        self._append("deviance", self.deviance(self.signal(), st.zeta, st.sigma_eps2))
        if self.config.use_sv_noise:
            self._append("sv_mu", st.noise.mu_eps)
            self._append("sv_phi", st.noise.phi_eps)
            self._append("sv_sigma2", st.noise.sigma_xi2)
        if st.upsilon is not None:
            self._append("upsilon", st.upsilon)

    def advance(self, on_iteration: Optional[Callable[["GibbsChain"], None]] = None) -> None:
        """Sweep until config.iters, recording retained states."""
        while self.iteration < self.config.iters:
            self.sweep()
            if self.retained():
                self.record()
            if on_iteration:
                on_iteration(self)

    def run(self, on_iteration: Optional[Callable[["GibbsChain"], None]] = None) -> PosteriorDraws:
        self.advance(on_iteration)
        return self.draws()

    def _stacked(self, key: str) -> Optional[np.ndarray]:
        values = self._store.get(key)
        return None if not values else np.stack(values)

    def _required(self, key: str) -> np.ndarray:
        values = self._stacked(key)
        if values is None:
            raise SamplerError(self.iteration, "draws", RuntimeError("no draws retained yet"))
        return values

    def draws(self) -> PosteriorDraws:
        beta = self._required("beta")
        zeta = self._required("zeta")
        sigma2 = self._required("sigma_eps2")
        dev_mean = self.deviance(beta.mean(axis=0), zeta.mean(axis=0), sigma2.mean(axis=0))
        return PosteriorDraws(
            d=self.config.d,
            method=self.config.method,
            beta=beta,
            log_omega2=self._required("log_omega2"),
            h=self._required("h"),
            gamma=self._required("gamma"),
            zeta=zeta,
            zeta_var=self._stacked("zeta_var"),
            sigma_eps2=sigma2,
            mu=self._required("mu"),
            phi1=self._required("phi1"),
            phi2=self._required("phi2"),
            tau2=self._required("tau2"),
            deviance=self._required("deviance"),
            deviance_at_mean=dev_mean,
            sv_mu=self._stacked("sv_mu"),
            sv_phi=self._stacked("sv_phi"),
            sv_sigma2=self._stacked("sv_sigma2"),
            upsilon=self._stacked("upsilon"),
        )


def run(series: TimeSeries, config: ModelConfig, its: Optional[ItsConfig] = None,
        on_iteration: Optional[Callable[[GibbsChain], None]] = None) -> PosteriorDraws:
    """Validate, initialise and run one chain seeded from ``config.seed``."""
    chain = GibbsChain(series, config, its=its)
    logger.debug("running %s chain: T=%d d=%d steps=%s", config.method, series.t_len, config.d,
                 ",".join(s.name for s in chain.steps))
    return chain.run(on_iteration)
