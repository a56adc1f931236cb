"""Exact combinatorics of wonderful compactifications, compactified apartments
and Bruhat-Tits buildings of SL_n over Q_p(sqrt p)."""

from .errors import ConfigurationError, ContractError, DomainError, WonderError
from .rootsys import RootSystem, build_root_system, lambda_tau

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ContractError",
    "DomainError",
    "RootSystem",
    "WonderError",
    "build_root_system",
    "lambda_tau",
]
