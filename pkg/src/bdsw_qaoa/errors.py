"""Exception types raised by the solver stack."""


class BdswError(Exception):
    """Base class for all package errors."""


class ParseError(BdswError, ValueError):
    """Malformed instance file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(BdswError):
    """A problem is too large for the requested exhaustive or simulated solve."""


class TenureError(BdswError):
    """Every variable is tabu and no aspiration move is available."""


class ConfigError(BdswError, ValueError):
    """Inconsistent solver configuration."""
