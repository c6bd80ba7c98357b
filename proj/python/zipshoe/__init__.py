"""Zip shift models of N-to-1 horseshoes."""

from ._core import (  # noqa: F401
    AlphabetError,
    CapExceeded,
    ConfigError,
    DomainError,
    Error,
    EscapeError,
    HorseshoeModel,
    IoError,
    NumericError,
    PerturbationTooLarge,
    PreconditionError,
    doubling_code,
    run,
)

__all__ = [
    "AlphabetError",
    "CapExceeded",
    "ConfigError",
    "DomainError",
    "Error",
    "EscapeError",
    "HorseshoeModel",
    "IoError",
    "NumericError",
    "PerturbationTooLarge",
    "PreconditionError",
    "doubling_code",
    "run",
]
