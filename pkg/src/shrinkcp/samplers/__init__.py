from .chain import GibbsChain, default_steps, init_state, run
from .evolution import (
    gamma_bounds, sample_eta_xi, sample_gamma, sample_h, sample_indicators,
    sample_mu, sample_phi1, sample_phi2
)
from .noise import sample_obs_sv
from .outliers import sample_outliers
from .step_base import BaseStep, FunctionStep, SweepStep
from .trend import sample_beta

__all__ = [
    'GibbsChain', 'default_steps', 'init_state', 'run', 'gamma_bounds',
    'sample_indicators', 'sample_h', 'sample_mu', 'sample_phi1', 'sample_phi2',
    'sample_gamma', 'sample_eta_xi', 'sample_outliers', 'sample_obs_sv', 'sample_beta',
    'BaseStep', 'FunctionStep', 'SweepStep'
]
