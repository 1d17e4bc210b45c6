"""Drazin-inverse solutions of singular systems by restarted DGMRES and ADGMRES."""

from ._drazinkit import (
    AxiomError,
    ConfigError,
    DimensionError,
    Error,
    NonFiniteError,
    UsageError,
    adgmres,
    dgmres,
    drazin_inverse,
    drazin_solution,
    example,
    index_of,
)

__all__ = [
    "AxiomError",
    "ConfigError",
    "DimensionError",
    "Error",
    "NonFiniteError",
    "UsageError",
    "adgmres",
    "dgmres",
    "drazin_inverse",
    "drazin_solution",
    "example",
    "index_of",
]
