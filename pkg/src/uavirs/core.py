"""Unit conversions, physical constants and 3D geometry shared by both link models.

Everything inside the models runs in linear SI units (W, m, Hz); the helpers
here convert to and from dB/dBm at the edges.
"""

import math
from dataclasses import dataclass

from .errors import InvalidParameterError, NumericDomainError

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact SI value
REFERENCE_DISTANCE = 1.0  # m


@dataclass(frozen=True)
class Constants:
    """Physical constants used by the free-space reference term."""

    c: float = SPEED_OF_LIGHT
    d0: float = REFERENCE_DISTANCE

    def __post_init__(self):
        if self.c != SPEED_OF_LIGHT:
            raise InvalidParameterError("c is fixed at 299792458 m/s", "c", self.c)
        if not (math.isfinite(self.d0) and self.d0 > 0):
            raise InvalidParameterError(f"d0 must be > 0, got {self.d0!r}", "d0", self.d0)


@dataclass(frozen=True)
class Point3:
    """A position in metres."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidParameterError(
                    f"coordinate {name} must be a finite number, got {v!r}", name, v
                )

    @classmethod
    def of(cls, value):
        """Build a point from a Point3 or any length-3 sequence."""
        if isinstance(value, Point3):
            return value
        try:
            x, y, z = value
        except (TypeError, ValueError):
            raise InvalidParameterError(
                f"expected a 3D point [x, y, z], got {value!r}", value=value
            ) from None
        return cls(x, y, z)

    def as_list(self):
        return [self.x, self.y, self.z]

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z


def db_to_linear(v):
    """10 ** (v / 10)."""
    if not math.isfinite(v):
        raise InvalidParameterError(f"dB value must be finite, got {v!r}", value=v)
    return 10.0 ** (v / 10.0)


def linear_to_db(v):
    """10 * log10(v) for a strictly positive ratio."""
    if not v > 0 or math.isinf(v):
        raise NumericDomainError(f"linear ratio must be finite and > 0, got {v!r}")
    return 10.0 * math.log10(v)


def watts_to_dbm(p):
    if not p > 0 or math.isinf(p):
        raise NumericDomainError(f"power must be finite and > 0 W, got {p!r}")
    return 10.0 * math.log10(p / 1e-3)


def dbm_to_watts(p_dbm):
    if math.isnan(p_dbm) or p_dbm == math.inf:
        raise InvalidParameterError(f"power in dBm must not be NaN or +inf, got {p_dbm!r}")
    return 1e-3 * 10.0 ** (p_dbm / 10.0)


def wavelength(fc):
    """Free-space wavelength c / fc in metres."""
    if not fc > 0 or math.isinf(fc):
        raise NumericDomainError(f"carrier frequency must be finite and > 0 Hz, got {fc!r}", "fc")
    return SPEED_OF_LIGHT / fc


def distance3(a, b):
    """Euclidean distance between two points."""
    return math.hypot(a.x - b.x, a.y - b.y, a.z - b.z)
