"""Error types for the heat-content toolkit.

Every failure raised on purpose by the library derives from ``LevyHeatError`` so
the CLI can map it onto exit status 1.
"""

from typing import Any, Dict, Optional


class LevyHeatError(Exception):
    """Base class for all library errors."""


class ArgumentError(LevyHeatError, ValueError):
    """Invalid argument: dimension mismatch, parameter outside its range."""


class UnsupportedOperationError(LevyHeatError):
    """Operation not available for the given model, measure or geometry."""


class HypothesisViolationError(LevyHeatError):
    """Parameters violate the hypotheses of the requested limit theorem."""


class NumericError(LevyHeatError):
    """A numerical procedure failed to reach its tolerance.

    Args:
        message: Human readable description.
        diagnostics: Values that help explain the failure (residuals, grid sizes).
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({details})"


class RangeError(NumericError):
    """Bracketing search exhausted its expansion cap."""


class ScenarioError(LevyHeatError):
    """Scenario file failed to parse or validate.

    Args:
        message: Description of the problem.
        path: Scenario file path.
        line: 1-based line of the offending key, when known.
    """

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path:
            location = f"{path}:{line}: " if line else f"{path}: "
        super().__init__(f"{location}{message}")
