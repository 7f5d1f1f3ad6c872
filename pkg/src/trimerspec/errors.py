"""Exception types shared across the library."""


class TrimerError(Exception):
    """Base class for all library errors."""


class DomainError(TrimerError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SectorError(TrimerError, ValueError):
    """An angular-momentum sector is not supported by the requested operation."""


class ShapeError(TrimerError, ValueError):
    """Profiles or grids passed together do not share the same sector/grid."""


class ConfigError(TrimerError, ValueError):
    """An unknown tag or invalid configuration value."""


class InputError(TrimerError, ValueError):
    """Malformed user input (unsorted grids, empty ranges, ...)."""


class BracketError(TrimerError, RuntimeError):
    """A root bracket failed to straddle; signals a broken ingredient, not bad input."""


class AccuracyError(TrimerError, RuntimeError):
    """A numerical routine exhausted its budget before reaching the requested accuracy.

    Carries the best available estimate so callers can inspect how far off it was.
    """

    def __init__(self, message: str, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
