"""Time-varying regression coefficients with one threshold-SV block per predictor.

Coefficients are stored time-major (beta_{0,t}, ..., beta_{p-1,t}, beta_{0,t+1}, ...)
so the joint precision stays banded with bandwidth d * p.  The global log
scale is split as mu_j = mu0 + a_j with mu0 = log tau0^2 and a_j = log tau_j^2.
"""
import logging
import warnings
from typing import Any, Callable, List, Optional, Tuple

import msgspec
import numpy as np

from ..core import (
    ChangepointReport, EvolutionState, ModelConfig, NoiseState, OutlierState, PosteriorDraws,
    TimeSeries, diff
)
from ..detect import build_report
from ..distributions import Rng, sample_polya_gamma
from ..errors import BadWeightsError, DesignRankWarning, Issue, NotPositiveDefiniteError, ValidationError
from ..linalg import SymBanded, build_difference_precision, cholesky, sample_gaussian
from ..samplers.chain import GibbsChain, mu_anchor
from ..samplers.evolution import (
    draw_gamma, draw_h, draw_indicators, draw_phi1, draw_phi2, draw_xi, gamma_bounds,
    init_evolution, log_omega2, mu_likelihood, threshold_flags
)
from ..samplers.noise import init_noise, sample_obs_sv
from ..samplers.outliers import init_outliers, sample_outliers
from ..samplers.step_base import FunctionStep, SweepStep
from ..samplers.trend import increment_weights

logger = logging.getLogger(__name__)


class RegressionState(msgspec.Struct):
    beta: np.ndarray            # T x p
    omega: np.ndarray           # (T - d) x p
    evos: List[EvolutionState]
    noise: NoiseState
    outliers: Optional[OutlierState] = None
    mu0: float = 0.0
    xi_mu0: float = 1.0
    a: Optional[np.ndarray] = None
    xi_a: Optional[np.ndarray] = None
    ridge: float = 0.0

    @property
    def tau0_sq(self) -> float:
        return float(np.exp(self.mu0))

    @property
    def zeta(self) -> np.ndarray:
        if self.outliers is None:
            return np.zeros(self.beta.shape[0])
        return self.outliers.zeta

    @property
    def sigma_eps2(self) -> np.ndarray:
        return self.noise.sigma2


def regression_precision(x: np.ndarray, y: np.ndarray, zeta: np.ndarray, sigma2: np.ndarray, d: int,
                         weights: List[np.ndarray], ridge: float = 0.0) -> Tuple[SymBanded, np.ndarray]:
    """Banded precision and linear term of the joint coefficient conditional."""
    t_len, p = x.shape
    q = SymBanded.zeros(t_len * p, d * p)
    for j in range(p):
        band = build_difference_precision(t_len, d, weights[j])
        for k in range(d + 1):
            q.ab[k * p, j::p] += band.ab[k]
        if ridge > 0:
            q.ab[0, j:d * p:p] += ridge
    for j1 in range(p):
        for j2 in range(j1 + 1):
            q.ab[j1 - j2, j2::p] += x[:, j1] * x[:, j2] / sigma2
    lin = (x * ((y - zeta) / sigma2)[:, None]).reshape(-1)
    return q, lin


def check_design(series: TimeSeries) -> np.ndarray:
    if series.design is None:
        raise ValidationError([Issue("BadDesign", "regression needs a design matrix (columns x1..xp)")])
    return series.design


class RegressionChain(GibbsChain):
    """Gibbs chain over T x p coefficients sharing one noise and outlier process."""

    def __init__(self, series: TimeSeries, config: ModelConfig, rng: Optional[Rng] = None,
                 steps: Optional[List[SweepStep]] = None):
        self.design = check_design(series)
        super().__init__(series, config, rng=rng, steps=steps if steps is not None else regression_steps())

    @property
    def n_predictors(self) -> int:
        return int(self.design.shape[1])

    def init_state(self) -> RegressionState:  # type: ignore[override]
        y, x, cfg = self.series.values, self.design, self.config
        c = cfg.c_offset
        p = x.shape[1]
        ridge = 0.0
        if np.linalg.matrix_rank(x) < p:
            warnings.warn("design matrix is numerically rank deficient; adding a weak initial-state prior",
                          DesignRankWarning, stacklevel=3)
            ridge = 1.0 / (1e4 * max(float(np.var(y)), 1.0))
        coef, *_ = np.linalg.lstsq(x, y, rcond=None)
        beta = np.tile(coef, (y.shape[0], 1))
        omega = diff(beta, cfg.d)
        bounds = gamma_bounds(y, cfg.d, c)
        anchor = mu_anchor(y, cfg.priors.tau_scale_factor, c)
        evos = [
            init_evolution(diff(y, cfg.d), log_omega2(omega[:, j], c), bounds, anchor, cfg.horseshoe, c)
            for j in range(p)
        ]
        return RegressionState(
            beta=beta,
            omega=omega,
            evos=evos,
            noise=init_noise(y),
            outliers=init_outliers(y.shape[0]) if cfg.use_outliers else None,
            mu0=evos[0].mu,
            a=np.zeros(p),
            xi_a=np.ones(p),
            ridge=ridge,
        )

    def lw2_of(self, j: int) -> np.ndarray:
        return log_omega2(self.state.omega[:, j], self.config.c_offset)

    def refresh_flags(self) -> None:
        for j, evo in enumerate(self.state.evos):
            evo.s = threshold_flags(self.lw2_of(j), evo.gamma)

    def signal(self) -> np.ndarray:
        return np.sum(self.design * self.state.beta, axis=1)

    def record(self) -> None:
        st = self.state
        self._append("beta", st.beta)
        self._append("log_omega2", np.stack([self.lw2_of(j) for j in range(self.n_predictors)], axis=1))
        self._append("h", np.stack([e.h for e in st.evos], axis=1))
        self._append("gamma", np.array([e.gamma for e in st.evos]))
        self._append("mu", np.array([e.mu for e in st.evos]))
        self._append("phi1", np.array([e.phi1 for e in st.evos]))
        self._append("phi2", np.array([e.phi2 for e in st.evos]))
        self._append("mu0", st.mu0)
        self._append("zeta", st.zeta)
        if st.outliers is not None:
            self._append("zeta_var", st.outliers.lam2)
        self._append("sigma_eps2", st.sigma_eps2)
        self._append("deviance", self.deviance(self.signal(), st.zeta, st.sigma_eps2))
        if self.config.use_sv_noise:
            self._append("sv_mu", st.noise.mu_eps)
            self._append("sv_phi", st.noise.phi_eps)
            self._append("sv_sigma2", st.noise.sigma_xi2)

    def draws_per_predictor(self) -> List[PosteriorDraws]:
        beta = self._required("beta")
        zeta = self._required("zeta")
        sigma2 = self._required("sigma_eps2")
        mean_signal = np.sum(self.design * beta.mean(axis=0), axis=1)
        dev_mean = self.deviance(mean_signal, zeta.mean(axis=0), sigma2.mean(axis=0))
        lw2, h = self._required("log_omega2"), self._required("h")
        gamma, mu = self._required("gamma"), self._required("mu")
        phi1, phi2 = self._required("phi1"), self._required("phi2")
        mu0 = self._required("mu0")
        out = []
        for j in range(self.n_predictors):
            out.append(PosteriorDraws(
                d=self.config.d,
                method=self.config.method,
                beta=beta[:, :, j],
                log_omega2=lw2[:, :, j],
                h=h[:, :, j],
                gamma=gamma[:, j],
                zeta=zeta,
                zeta_var=self._stacked("zeta_var"),
                sigma_eps2=sigma2,
                mu=mu[:, j],
                phi1=phi1[:, j],
                phi2=phi2[:, j],
                tau2=np.exp(mu[:, j]),
                deviance=self._required("deviance"),
                deviance_at_mean=dev_mean,
                sv_mu=self._stacked("sv_mu"),
                sv_phi=self._stacked("sv_phi"),
                sv_sigma2=self._stacked("sv_sigma2"),
                predictor=j,
                mu0=mu0,
            ))
        return out

    def run(self, on_iteration: Optional[Callable[[GibbsChain], None]] = None) -> PosteriorDraws:
        raise NotImplementedError("a regression chain yields one draw set per predictor; use run_all()")

    def draws(self) -> PosteriorDraws:
        raise NotImplementedError("a regression chain yields one draw set per predictor; use draws_per_predictor()")

    def run_all(self, on_iteration: Optional[Callable[[GibbsChain], None]] = None) -> List[PosteriorDraws]:
        self.advance(on_iteration)
        return self.draws_per_predictor()


def _each(fn: Callable[[RegressionChain, int, EvolutionState], None]) -> Callable[[Any], None]:
    def update(chain: Any) -> None:
        for j, evo in enumerate(chain.state.evos):
            fn(chain, j, evo)
    return update


def sample_mu_decomposed(chain: RegressionChain) -> None:
    """mu0 from the pooled conditional, then each offset a_j given mu0."""
    st = chain.state
    rng = chain.rng
    anchor = st.evos[0].mu_anchor
    pieces = [mu_likelihood(evo) for evo in st.evos]
    prec_j = np.array([p for p, _ in pieces])
    lin_j = np.array([l for _, l in pieces])
    assert st.a is not None and st.xi_a is not None

    prec0 = st.xi_mu0 + float(prec_j.sum())
    lin0 = st.xi_mu0 * anchor + float(np.sum(lin_j - prec_j * st.a))
    st.mu0 = lin0 / prec0 + rng.standard_normal() / np.sqrt(prec0)

    prec_a = st.xi_a + prec_j
    st.a = (lin_j - prec_j * st.mu0) / prec_a + rng.standard_normal(prec_a.shape[0]) / np.sqrt(prec_a)

    st.xi_mu0 = float(sample_polya_gamma(rng, 1, st.mu0 - anchor))
    st.xi_a = np.asarray(sample_polya_gamma(rng, 1, st.a))
    for j, evo in enumerate(st.evos):
        evo.mu = st.mu0 + float(st.a[j])
        evo.xi[0] = float(sample_polya_gamma(rng, 1, evo.h[0] - evo.mu))


def sample_coefficients(chain: RegressionChain) -> None:
    st = chain.state
    cfg = chain.config
    y = chain.series.values

    def assemble(clip: bool) -> Tuple[SymBanded, np.ndarray]:
        hs = [np.clip(e.h, -cfg.h_clip, cfg.h_clip) if clip else e.h for e in st.evos]
        return regression_precision(chain.design, y, st.zeta, st.sigma_eps2, cfg.d,
                                    [increment_weights(h) for h in hs], st.ridge)

    try:
        q, lin = assemble(False)
        factor = cholesky(q)
    except (NotPositiveDefiniteError, BadWeightsError) as exc:
        logger.debug("coefficient precision unusable (%s); retrying with clipped h", exc)
        q, lin = assemble(True)
        factor = cholesky(q)
    st.beta = sample_gaussian(chain.rng, factor, lin).reshape(y.shape[0], chain.n_predictors)
    st.omega = diff(st.beta, cfg.d)
    chain.refresh_flags()


def regression_steps() -> List[SweepStep]:
    shrink = lambda cfg: not cfg.horseshoe  # noqa: E731
    return [
        FunctionStep("indicators", _each(lambda ch, j, e: draw_indicators(ch.rng, e, ch.lw2_of(j)))),
        FunctionStep("h", _each(lambda ch, j, e: draw_h(ch.rng, e, ch.lw2_of(j)))),
        FunctionStep("mu", sample_mu_decomposed),
        FunctionStep("phi1", _each(lambda ch, j, e: draw_phi1(ch.rng, e, ch.config.priors)), shrink),
        FunctionStep("phi2", _each(lambda ch, j, e: draw_phi2(ch.rng, e, ch.config.priors)), shrink),
        # one threshold at a time, the others held fixed
        FunctionStep("gamma", _each(lambda ch, j, e: draw_gamma(ch.rng, e, ch.lw2_of(j), ch.config.grid_size))),
        FunctionStep("xi", _each(lambda ch, j, e: draw_xi(ch.rng, e))),
        FunctionStep("outliers", sample_outliers, lambda cfg: cfg.use_outliers),
        FunctionStep("noise", sample_obs_sv),
        FunctionStep("beta", sample_coefficients),
    ]


def fit_regression(series: TimeSeries, config: ModelConfig,
                   on_iteration: Optional[Callable[[GibbsChain], None]] = None
                   ) -> Tuple[List[PosteriorDraws], List[ChangepointReport]]:
    """Fit the regression extension; one draws object and one report per predictor."""
    chain = RegressionChain(series, config)
    per_predictor = chain.run_all(on_iteration)
    reports = [build_report(series, draws, config) for draws in per_predictor]
    return per_predictor, reports
