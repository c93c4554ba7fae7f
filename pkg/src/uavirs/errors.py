"""Exception types raised by the link models, sweeps and scenario loader."""


class LinkModelError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(LinkModelError, ValueError):
    """A parameter is out of range, non-finite or of the wrong kind.

    ``field`` holds the offending parameter name when one is known.
    """

    def __init__(self, message, field=None, value=None):
        super().__init__(message)
        self.field = field
        self.value = value


class NumericDomainError(LinkModelError, ValueError):
    """The requested quantity is undefined for the given inputs (log of zero, etc.)."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class SingularAngleError(NumericDomainError):
    """An incidence angle of 90 degrees zeroes a cosine in the IRS model."""


class DegenerateGeometryError(NumericDomainError):
    """Two link endpoints coincide, so a link distance is zero."""


class ConfigurationError(LinkModelError, ValueError):
    """A sweep or scenario combination is not meaningful (e.g. angle axis on a conventional link)."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ScenarioParseError(LinkModelError, ValueError):
    """A scenario file could not be parsed."""
