"""Exception hierarchy shared by every module."""


class WonderError(Exception):
    """Base class for all errors raised by the package."""


class ConfigurationError(WonderError, ValueError):
    """Unsupported type/rank, bad spec strings, out-of-range parameters."""


class ContractError(WonderError, ValueError):
    """A documented precondition of an operation does not hold."""


class DomainError(WonderError, ValueError):
    """Input is well formed but outside the domain where the operation is defined."""
