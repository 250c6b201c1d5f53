"""
Exception hierarchy shared by the services and the command handlers.
"""

from typing import Any, Dict, Optional


class RatioLabError(Exception):
    """Base exception for every failure raised by the services."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class DomainError(RatioLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(DomainError):
    """A run configuration failed validation."""

    def __init__(self, message: str, errors: Optional[list] = None):
        self.errors = errors or [message]
        super().__init__(message, details={"errors": self.errors})


class NumericalError(RatioLabError):
    """A numerical procedure failed (quadrature, least squares)."""


class AcceptanceError(RatioLabError):
    """One or more acceptance bands failed in a verification run."""

    def __init__(self, message: str, failures: Optional[list] = None):
        self.failures = failures or []
        super().__init__(message, details={"failures": self.failures})
