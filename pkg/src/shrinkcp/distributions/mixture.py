from typing import Optional

import msgspec
import numpy as np

from .rng import Rng

# Ten-component normal mixture for log(chi^2_1) (Omori, Chib, Shephard, Nakajima)
_WEIGHTS = (0.00609, 0.04775, 0.13057, 0.20674, 0.22715, 0.18842, 0.12047, 0.05591, 0.01575, 0.00115)
_MEANS = (1.92677, 1.34744, 0.73504, 0.02266, -0.85173, -1.97278, -3.46788, -5.55246, -8.68384, -14.65)
_VARIANCES = (0.11265, 0.17788, 0.26768, 0.40611, 0.62699, 0.98583, 1.57469, 2.54498, 4.16591, 7.33342)


class LogChiSqMixture(msgspec.Struct, frozen=True):
    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    @property
    def n_components(self) -> int:
        return int(self.weights.shape[0])

    def mean(self) -> float:
        return float(np.dot(self.weights, self.means))

    def variance(self) -> float:
        m = self.mean()
        return float(np.dot(self.weights, self.variances + (self.means - m) ** 2))


def mixture_table() -> LogChiSqMixture:
    w = np.asarray(_WEIGHTS, dtype=float)
    return LogChiSqMixture(
        weights=w / w.sum(),
        means=np.asarray(_MEANS, dtype=float),
        variances=np.asarray(_VARIANCES, dtype=float),
    )


MIXTURE = mixture_table()


def sample_mixture_indicator(rng: Rng, z: np.ndarray, h: np.ndarray,
                             table: Optional[LogChiSqMixture] = None) -> np.ndarray:
    """r_t with P(r) proportional to q_r N(z_t; h_t + m_r, v_r), elementwise."""
    tab = MIXTURE if table is None else table
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    hh = np.broadcast_to(np.asarray(h, dtype=float), zz.shape)
    resid = zz[:, None] - hh[:, None] - tab.means[None, :]
    logp = np.log(tab.weights)[None, :] - 0.5 * np.log(tab.variances)[None, :] - 0.5 * resid ** 2 / tab.variances[None, :]
    logp -= logp.max(axis=1, keepdims=True)
    prob = np.exp(logp)
    cdf = np.cumsum(prob, axis=1)
    u = rng.random(zz.shape[0]) * cdf[:, -1]
    r = (cdf < u[:, None]).sum(axis=1)
    return np.minimum(r, tab.n_components - 1).astype(np.int64)
