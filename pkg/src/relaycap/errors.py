"""Exception hierarchy shared by the library and the CLI."""


class RelayCapError(Exception):
    """Base class for all relaycap errors."""


class DomainError(RelayCapError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(RelayCapError, ValueError):
    """Array dimensions disagree with each other or with a declared size."""


class PreconditionError(RelayCapError, ValueError):
    """An operation was called on an instance it is not defined for."""


class ResourceError(RelayCapError):
    """An exhaustive computation would exceed the configured size limit."""


class ConfigError(RelayCapError, ValueError):
    """Invalid ensemble or CLI configuration."""
