"""
Exception hierarchy for the certification pipeline.
"""
from typing import Optional


class IntervalDomainError(ValueError):
    """Raised when an interval operation leaves its domain (e.g. 1/[−1,1], sqrt([−2,−1]))."""


class SolverError(RuntimeError):
    """Floating-point solver failed to converge.

    Args:
        message (str): Human readable description.
        iterations (int): Iterations performed before giving up.
        residual (float): Residual norm reached.
    """

    def __init__(self, message: str, iterations: int = 0, residual: float = float("nan")) -> None:
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class CertificationError(RuntimeError):
    """A rigorous step could not be proven. This is a sound failure, not a bug.

    Args:
        message (str): Human readable description.
        stage (str): Pipeline stage that failed (e.g. "eigs", "saddle", "morley").
    """

    def __init__(self, message: str, stage: Optional[str] = None) -> None:
        super().__init__(message)
        self.stage = stage


class InconsistencyError(CertificationError):
    """Two enclosures of the same quantity are disjoint. Signals a bug."""
