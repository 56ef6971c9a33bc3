"""Worst-case error analysis in weighted half-period cosine spaces.

The package computes exact worst-case errors of midpoint-grid quadrature,
error bounds for sampled spectral approximation, and exponential-convergence
tractability classifications for spaces of smooth functions whose cosine
coefficients decay like omega**(sum_j a_j * k_j**b_j).
"""

__version__ = "0.1.0"

from .weights import SequenceRule, SeriesSum, WeightSpec
from .space import CosinePolynomial

__all__ = [
    "SequenceRule",
    "SeriesSum",
    "WeightSpec",
    "CosinePolynomial",
    "__version__",
]
