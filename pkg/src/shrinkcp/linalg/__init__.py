from .banded import (
    SymBanded, BandedFactor, cholesky, solve, sample_gaussian,
    build_difference_precision, difference_coefficients
)

__all__ = [
    'SymBanded', 'BandedFactor', 'cholesky', 'solve', 'sample_gaussian',
    'build_difference_precision', 'difference_coefficients'
]
