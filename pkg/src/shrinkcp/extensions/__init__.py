from .interrupted import (
    fit_interrupted, intervention_summary, level_shift_draws, slope_change_draws, summarize_effect
)
from .regression import (
    RegressionChain, RegressionState, fit_regression, regression_precision, regression_steps,
    sample_coefficients, sample_mu_decomposed
)

__all__ = [
    "fit_interrupted",
    "intervention_summary",
    "level_shift_draws",
    "slope_change_draws",
    "summarize_effect",
    "RegressionChain",
    "RegressionState",
    "fit_regression",
    "regression_precision",
    "regression_steps",
    "sample_coefficients",
    "sample_mu_decomposed",
]
