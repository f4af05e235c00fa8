"""Numerical laboratory for half-line Dirac (Zakharov-Shabat) operators."""

from .data import (Chirp, Constant, GatedChirp, GridSamples, OperatorData,
                   PeriodicSamples, Zero, grid_samples_from_file,
                   operator_from_spec)
from .errors import (ConfigError, DataError, DiracLabError, DomainError,
                     InstabilityError, ModelError, ResolutionError,
                     UnsupportedOrderError)

__all__ = [
    "Chirp", "Constant", "GatedChirp", "GridSamples", "OperatorData",
    "PeriodicSamples", "Zero", "grid_samples_from_file", "operator_from_spec",
    "ConfigError", "DataError", "DiracLabError", "DomainError",
    "InstabilityError", "ModelError", "ResolutionError",
    "UnsupportedOrderError",
]

__version__ = "0.1.0"
