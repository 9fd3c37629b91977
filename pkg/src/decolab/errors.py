"""Exception taxonomy shared across the package.

ConfigError maps to CLI exit code 2, NumericalError to exit code 3.
"""


class ConfigError(ValueError):
    """Invalid configuration: unknown keys, bad values, violated hypotheses."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to meet its accuracy contract."""

    def __init__(self, message, error_estimate=None):
        if error_estimate is not None:
            message = f"{message} (achieved error estimate {error_estimate:.3e})"
        super().__init__(message)
        self.error_estimate = error_estimate


class OutOfDomainError(ValueError):
    """Evaluation requested at a pole or outside a function's domain."""
