"""Exception hierarchy shared across the package."""


class PhotonRadarError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(PhotonRadarError):
    """A config object or input file violates its contract."""


class DomainError(PhotonRadarError):
    """An argument is outside the mathematical domain of an operation."""


class CapacityError(PhotonRadarError):
    """A request would exceed a hard size budget (tag count, grid cells)."""


class FitError(PhotonRadarError):
    """A least-squares fit could not be solved or gave an inadmissible result."""
