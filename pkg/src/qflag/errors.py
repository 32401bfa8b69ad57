"""Exception types raised across qflag."""


class QFlagError(Exception):
    """Base class for all qflag errors."""


class DigraphFormatError(QFlagError, ValueError):
    """Malformed digraph input; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CeilingExceeded(QFlagError):
    """A size guard tripped during enumeration.

    ``counts`` holds the per-dimension counts reached before aborting.
    """

    def __init__(self, message, counts=()):
        self.counts = tuple(counts)
        super().__init__(message)


class EmptyConnectivityError(QFlagError, ValueError):
    """No simplices of dimension >= q exist."""


class AugmentationInfeasible(QFlagError):
    """Path augmentation found no source-to-target route inside a component."""


class InvariantViolation(QFlagError, RuntimeError):
    """An internal invariant (acyclicity, nearness re-check) failed."""
