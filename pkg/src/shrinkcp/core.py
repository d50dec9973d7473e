"""Domain types, validation and the JSON schema shared by every module.

Arrays are numpy arrays inside the structs; msgspec handles them through the
``enc_hook``/``dec_hook`` pair below so every type here survives a JSON round
trip bit-identically for finite values.
"""
from typing import Any, List, Optional, Tuple, Type, TypeVar

import msgspec
import numpy as np

from .errors import BadParamError, Issue, TooShortError, ValidationError

SCHEMA_VERSION = 1
MAX_ORDER = 3

T_ = TypeVar("T_")


class PriorHyper(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    # Z(1/2, 1/2) innovations; the PG(1, .) augmentation relies on alpha + beta = 1
    z_alpha: float = 0.5
    z_beta: float = 0.5
    phi1_beta_a: float = 10.0
    phi1_beta_b: float = 2.0
    phi2_mean: float = -2.0
    phi2_sd: float = 0.5
    phi2_lo: float = -10.0  # practical lower edge of the phi2 slice bracket
    tau_scale_factor: float = 1.0
    outlier_global_scale: float = 0.01
    outlier_local_scale: float = 1.0
    sv_mu_prior_sd: float = 10.0
    sv_phi_beta_a: float = 20.0
    sv_phi_beta_b: float = 1.5
    sv_sigma_ig_shape: float = 2.5
    sv_sigma_ig_scale: float = 0.25
    noise_ig_shape: float = 0.01
    noise_ig_scale: float = 0.01


class ModelConfig(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    d: int = 2
    iters: int = 5000
    burn: int = 2000
    thin: int = 1
    seed: int = 0
    use_sv_noise: bool = True
    use_outliers: bool = True
    horseshoe: bool = False
    cp_prob_cutoff: float = 0.5
    outlier_cutoff: float = 0.95
    min_cp_separation: int = 5
    cp_window: Optional[int] = None  # None -> d
    grid_size: int = 150
    c_offset: float = 1e-8
    h_clip: float = 50.0
    progress_every: int = 500
    priors: PriorHyper = msgspec.field(default_factory=PriorHyper)

    @property
    def n_draws(self) -> int:
        """Retained draw count M"""
        return max(0, (self.iters - self.burn) // self.thin)

    @property
    def method(self) -> str:
        return "horseshoe" if self.horseshoe else "abco"


class ItsConfig(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    pi: int
    upsilon_var: Optional[float] = None  # None -> 100 * var(diff(y, 2))


class TimeSeries(msgspec.Struct, frozen=True):
    values: np.ndarray
    design: Optional[np.ndarray] = None
    labels: Optional[List[str]] = None

    @property
    def t_len(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_predictors(self) -> int:
        return 0 if self.design is None else int(self.design.shape[1])


def make_series(values: Any, design: Any = None, labels: Optional[List[str]] = None) -> TimeSeries:
    """Build a TimeSeries with float64 storage (design promoted to 2-D)."""
    vals = np.asarray(values, dtype=float).reshape(-1)
    mat = None
    if design is not None:
        mat = np.asarray(design, dtype=float)
        if mat.ndim == 1:
            mat = mat.reshape(-1, 1)
    return TimeSeries(values=vals, design=mat, labels=None if labels is None else [str(x) for x in labels])


class EvolutionState(msgspec.Struct):
    """Threshold-SV block for one set of increments (one per predictor in regression)."""
    h: np.ndarray
    s: np.ndarray
    r: np.ndarray
    xi: np.ndarray
    mu: float
    phi1: float
    phi2: float
    gamma: float
    gamma_lo: float
    gamma_hi: float
    xi_mu: float = 1.0  # precision of the Z prior on mu; xi[0] is the initial-state precision
    mu_anchor: float = 0.0

    @property
    def h_tilde(self) -> np.ndarray:
        return self.h - self.mu

    @property
    def eta(self) -> np.ndarray:
        """Implied Z-innovations; deterministic given h, phi and s."""
        ht = self.h_tilde
        out = np.empty_like(ht)
        out[0] = ht[0]
        out[1:] = ht[1:] - (self.phi1 + self.phi2 * self.s[:-1]) * ht[:-1]
        return out


class OutlierState(msgspec.Struct):
    zeta: np.ndarray
    lam2: np.ndarray
    nu: np.ndarray
    eta2: np.ndarray
    iota: np.ndarray
    tau2: float = 1.0
    xi_aux: float = 1.0


class NoiseState(msgspec.Struct):
    sigma2: np.ndarray
    log_vol: np.ndarray
    r: np.ndarray
    mu_eps: float = 0.0
    phi_eps: float = 0.9
    sigma_xi2: float = 0.1


class LatentState(msgspec.Struct):
    """Everything one Gibbs chain updates.  Owned by the chain and mutated in place."""
    beta: np.ndarray
    omega: np.ndarray
    evo: EvolutionState
    noise: NoiseState
    outliers: Optional[OutlierState] = None
    upsilon: Optional[np.ndarray] = None

    @property
    def h(self) -> np.ndarray:
        return self.evo.h

    @property
    def s(self) -> np.ndarray:
        return self.evo.s

    @property
    def mu(self) -> float:
        return self.evo.mu

    @property
    def tau2(self) -> float:
        return float(np.exp(self.evo.mu))

    @property
    def lam2(self) -> np.ndarray:
        return np.exp(self.evo.h - self.evo.mu)

    @property
    def zeta(self) -> np.ndarray:
        if self.outliers is None:
            return np.zeros_like(self.beta)
        return self.outliers.zeta

    @property
    def sigma_eps2(self) -> np.ndarray:
        return self.noise.sigma2


class PosteriorDraws(msgspec.Struct, frozen=True):
    d: int
    method: str
    beta: np.ndarray         # M x T
    log_omega2: np.ndarray   # M x (T - d)
    h: np.ndarray            # M x (T - d)
    gamma: np.ndarray        # M
    zeta: np.ndarray         # M x T
    zeta_var: Optional[np.ndarray]  # M x T, None without the outlier component
    sigma_eps2: np.ndarray   # M x T
    mu: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    tau2: np.ndarray
    deviance: np.ndarray
    deviance_at_mean: float
    sv_mu: Optional[np.ndarray] = None
    sv_phi: Optional[np.ndarray] = None
    sv_sigma2: Optional[np.ndarray] = None
    upsilon: Optional[np.ndarray] = None  # M x 2 in interrupted mode
    predictor: Optional[int] = None
    mu0: Optional[np.ndarray] = None  # M, shared log-scale level in regression fits

    @property
    def n_draws(self) -> int:
        return int(self.beta.shape[0])


class EffectSummary(msgspec.Struct, frozen=True):
    mean: float
    sd: float
    p2_5: float
    p50: float
    p97_5: float
    hist_edges: List[float]
    hist_counts: List[int]


class InterventionSummary(msgspec.Struct, frozen=True):
    pi: int
    upsilon_var: float
    level_shift: EffectSummary
    slope_change: EffectSummary


class ChangepointReport(msgspec.Struct, frozen=True):
    method: str
    d: int
    values: np.ndarray
    cp_prob: np.ndarray
    changepoints: List[int]
    outlier_scores: Optional[np.ndarray]
    flagged_outliers: Optional[List[int]]
    trend_mean: np.ndarray
    trend_lo95: np.ndarray
    trend_hi95: np.ndarray
    obs_lo95: np.ndarray
    obs_hi95: np.ndarray
    dic: float
    kappa: np.ndarray
    psi: np.ndarray
    labels: Optional[List[str]] = None
    predictor: Optional[int] = None
    intervention: Optional[InterventionSummary] = None
    cp_window_prob: Optional[np.ndarray] = None
    schema_version: int = SCHEMA_VERSION


def validate_config(config: ModelConfig, series: TimeSeries) -> Tuple[ModelConfig, TimeSeries]:
    """Return the pair unchanged iff every invariant holds, else raise with all violations."""
    issues: List[Issue] = []
    d = config.d
    if d not in (1, 2, 3):
        issues.append(Issue("BadBounds", f"difference order d={d} must be 1, 2 or 3"))
    else:
        need = 2 * d + 2
        if series.t_len < need:
            issues.append(Issue("SeriesTooShort", f"T={series.t_len} < 2D+2={need}"))
    if not np.all(np.isfinite(series.values)):
        issues.append(Issue("NonFinite", "values contain NaN or Inf"))
    if series.design is not None:
        if series.design.ndim != 2 or series.design.shape[0] != series.t_len or series.design.shape[1] < 1:
            issues.append(Issue("BadDesign", f"design shape {series.design.shape} does not match T={series.t_len}"))
        elif not np.all(np.isfinite(series.design)):
            issues.append(Issue("NonFinite", "design contains NaN or Inf"))

    if config.iters < 1:
        issues.append(Issue("BadBounds", "iters must be >= 1"))
    if not 0 <= config.burn < config.iters:
        issues.append(Issue("BadBounds", f"burn={config.burn} must satisfy 0 <= burn < iters={config.iters}"))
    if config.thin < 1:
        issues.append(Issue("BadBounds", "thin must be >= 1"))
    elif config.burn < config.iters and config.n_draws < 1:
        issues.append(Issue("BadBounds", "no draws would be retained"))
    if config.grid_size < 2:
        issues.append(Issue("BadBounds", "grid_size must be >= 2"))
    if not 0.0 < config.cp_prob_cutoff < 1.0:
        issues.append(Issue("BadBounds", "cp_prob_cutoff must lie in (0, 1)"))
    if not 0.0 < config.outlier_cutoff < 1.0:
        issues.append(Issue("BadBounds", "outlier_cutoff must lie in (0, 1)"))
    if config.min_cp_separation < 1:
        issues.append(Issue("BadBounds", "min_cp_separation must be >= 1"))
    if config.cp_window is not None and config.cp_window < 1:
        issues.append(Issue("BadBounds", "cp_window must be >= 1"))
    if config.c_offset <= 0 or config.h_clip <= 0:
        issues.append(Issue("BadBounds", "c_offset and h_clip must be positive"))
    if not 0 <= config.seed < 2 ** 64:
        issues.append(Issue("BadBounds", "seed must be a 64-bit unsigned integer"))

    p = config.priors
    for name in msgspec.structs.asdict(p):
        if name in ("phi2_mean", "phi2_lo"):
            continue
        if getattr(p, name) <= 0:
            issues.append(Issue("BadBounds", f"prior {name} must be strictly positive"))
    if p.z_alpha + p.z_beta != 1.0:
        issues.append(Issue("BadBounds", "z_alpha + z_beta must equal 1 (PG(1, .) augmentation)"))
    if not p.phi2_lo < 0.0:
        issues.append(Issue("BadBounds", "phi2_lo must be negative"))

    if issues:
        raise ValidationError(issues)
    return config, series


def diff(values: Any, d: int) -> np.ndarray:
    """Iterated first differences; diff(v, 2) == diff(diff(v, 1), 1)."""
    arr = np.asarray(values, dtype=float)
    if d < 0:
        raise BadParamError(f"difference order must be >= 0, got {d}")
    if arr.shape[0] <= d:
        raise TooShortError(f"need more than {d} values to take a difference of order {d}, got {arr.shape[0]}")
    return np.diff(arr, n=d, axis=0) if d > 0 else arr.copy()


def integrate(head: Any, omega: Any) -> np.ndarray:
    """Invert diff: rebuild beta from its first D values and omega = diff(beta, D)."""
    head_arr = np.asarray(head, dtype=float)
    d = head_arr.shape[0]
    seq = np.asarray(omega, dtype=float)
    starts = [np.diff(head_arr, n=k)[0] for k in range(d)]
    for k in range(d - 1, -1, -1):
        seq = np.concatenate(([starts[k]], starts[k] + np.cumsum(seq)))
    return seq


def _enc_hook(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise NotImplementedError(f"cannot encode {type(obj)!r}")


def _dec_hook(typ: Type, obj: Any) -> Any:
    if typ is np.ndarray:
        return np.asarray(obj)
    raise NotImplementedError(f"cannot decode {typ!r}")


_encoder = msgspec.json.Encoder(enc_hook=_enc_hook)


def encode(obj: Any) -> bytes:
    return _encoder.encode(obj)


def decode(data: bytes, typ: Type[T_]) -> T_:
    return msgspec.json.decode(data, type=typ, dec_hook=_dec_hook)
