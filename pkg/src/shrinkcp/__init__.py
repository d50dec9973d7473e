"""Bayesian changepoint detection with threshold shrinkage on D-th order trend increments."""
from .core import (
    ChangepointReport, ItsConfig, ModelConfig, PosteriorDraws, PriorHyper, TimeSeries, make_series, validate_config
)
from .detect import build_report
from .engine import FitEngine, FitResult
from .errors import SamplerError, ShrinkcpError, ValidationError
from .extensions import fit_interrupted, fit_regression
from .samplers import GibbsChain, run

__version__ = "0.1.0"

__all__ = [
    "ChangepointReport",
    "ItsConfig",
    "ModelConfig",
    "PosteriorDraws",
    "PriorHyper",
    "TimeSeries",
    "make_series",
    "validate_config",
    "build_report",
    "FitEngine",
    "FitResult",
    "SamplerError",
    "ShrinkcpError",
    "ValidationError",
    "fit_interrupted",
    "fit_regression",
    "GibbsChain",
    "run",
]
