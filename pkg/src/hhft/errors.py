"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Unsupported group kind, malformed function spec, unknown option."""


class ArgumentError(ValueError):
    """An argument violates an operation's precondition."""


class ResourceError(RuntimeError):
    """A requested computation exceeds the configured resource cap."""
