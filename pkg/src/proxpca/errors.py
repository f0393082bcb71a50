"""Exception types shared across the package.

Each error carries a ``category`` used by the service and the CLI to map
failures onto HTTP error payloads and process exit codes (config -> 2,
data -> 3, numeric -> 4).
"""

from __future__ import annotations


class ProxpcaError(Exception):
    """Base class; ``stage`` is set by the pipeline to name where it failed."""

    category = "config"

    def __init__(self, message: str, *, stage: str | None = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def __str__(self) -> str:
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


class InvalidInputError(ProxpcaError, ValueError):
    """Arguments violate an operation's preconditions."""

    category = "config"


class DataFormatError(ProxpcaError, ValueError):
    """Malformed dataset file; message names the offending line."""

    category = "data"


class NumericError(ProxpcaError, ArithmeticError):
    """A numerical computation produced an unusable result."""

    category = "numeric"


class DivergenceError(NumericError):
    """An iterate became non-finite; ``iteration`` is the failing pass index."""

    def __init__(self, message: str, iteration: int, *, stage: str | None = None):
        super().__init__(message, stage=stage)
        self.iteration = iteration
