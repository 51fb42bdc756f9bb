"""Small-time heat content of Lévy processes.

Numerical evaluation of H(t) = ∫ E^x g(X_t) μ(dx) and of the constants its
scaled deficit converges to as t ↓ 0.
"""

from .errors import (
    ArgumentError,
    HypothesisViolationError,
    LevyHeatError,
    NumericError,
    RangeError,
    ScenarioError,
    UnsupportedOperationError,
)
from .levy_models import LevyModel, psi, psi_star, scaling_limit

__all__ = [
    "ArgumentError",
    "HypothesisViolationError",
    "LevyHeatError",
    "LevyModel",
    "NumericError",
    "RangeError",
    "ScenarioError",
    "UnsupportedOperationError",
    "psi",
    "psi_star",
    "scaling_limit",
]
