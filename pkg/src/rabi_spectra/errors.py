"""Exception hierarchy shared across the package."""


class RabiSpectraError(Exception):
    """Base class for all package errors."""


class DomainError(RabiSpectraError):
    """Evaluation point or parameter outside the supported domain."""


class PoleProximity(RabiSpectraError):
    """Spectral parameter too close to a resonant (integer-shifted) value."""


class ResonantExponents(RabiSpectraError):
    """Series recurrence denominator vanished (integer exponent difference)."""


class NoConvergence(RabiSpectraError):
    """Iteration or truncation budget exhausted before reaching tolerance.

    May carry partial results in ``last_result`` for diagnostics.
    """

    def __init__(self, message, last_result=None):
        super().__init__(message)
        self.last_result = last_result


class InvalidConfig(RabiSpectraError):
    """Command-line or run configuration failed validation."""
