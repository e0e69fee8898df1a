from __future__ import annotations

from pathlib import Path


class CasimirError(RuntimeError):
    """Base class for thermocasimir runtime failures."""


class DomainError(CasimirError, ValueError):
    """Raised when an argument lies outside an operation's domain."""


class RegimeError(DomainError):
    """Raised when an asymptotic form is evaluated outside its regime of validity."""

    def __init__(self, message: str, *, parameter: str, value: float, limit: float):
        super().__init__(message)
        self.parameter = parameter
        self.value = value
        self.limit = limit


class SingularConfigurationError(CasimirError):
    """Raised when two slab regions are optically indistinguishable."""


class InstabilityError(CasimirError):
    """Raised when an oscillator determinant factor is not positive."""


class ModelSpecError(CasimirError):
    """Raised for an unparseable dispersion model specification."""


class IngestionError(CasimirError):
    """Raised when optical or spectral data cannot be ingested."""

    def __init__(self, message: str, *, path: Path | str | None = None, line: int | None = None):
        location = ""
        if path is not None and line is not None:
            location = f"{path}:{line}: "
        elif path is not None:
            location = f"{path}: "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line
