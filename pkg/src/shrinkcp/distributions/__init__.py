from .rng import Rng, make_rng, spawn_seeds
from .polya_gamma import sample_polya_gamma, pg_mean
from .univariate import sample_inverse_gamma, sample_trunc_normal, beta_logpdf, normal_logpdf
from .slice import slice_sample
from .griddy import griddy_sample
from .mixture import LogChiSqMixture, MIXTURE, mixture_table, sample_mixture_indicator

__all__ = [
    'Rng', 'make_rng', 'spawn_seeds',
    'sample_polya_gamma', 'pg_mean',
    'sample_inverse_gamma', 'sample_trunc_normal', 'beta_logpdf', 'normal_logpdf',
    'slice_sample', 'griddy_sample',
    'LogChiSqMixture', 'MIXTURE', 'mixture_table', 'sample_mixture_indicator'
]
