"""Exception taxonomy shared across the toolkit.

CLI exit-code mapping: UsageError -> 1, DataFormatError (and subclasses)
-> 2, NumericError (and subclasses) -> 3.
"""


class NavFuseError(Exception):
    """Base class for all toolkit errors."""


class UsageError(NavFuseError):
    """Bad command-line arguments or configuration."""


class NumericError(NavFuseError):
    """Numerical failure (singularity, divergence, non-finite state)."""


class GimbalLockError(NumericError):
    """DCM-to-Euler conversion attempted at |pitch| ~ 90 deg."""


class PolarSingularityError(NumericError):
    """Position rates undefined: cos(latitude) below threshold."""


class IllConditionedError(NumericError):
    """A matrix solve exceeded the allowed condition number."""


class WindowNotFullError(NavFuseError):
    """Innovation statistics requested before the window filled."""


class DataFormatError(NavFuseError):
    """Malformed input file."""


class HeaderError(DataFormatError):
    """File header does not match the documented column layout."""


class MonotonicityError(DataFormatError):
    """Timestamps are not strictly increasing."""


class RateError(DataFormatError):
    """Stream sample rate outside the allowed jitter band."""


class InfeasibleManeuverError(NavFuseError):
    """Scenario script demands accelerations beyond the configured bound."""
