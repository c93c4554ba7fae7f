"""Link models for a conventional UAV-to-user hop and a UAV-mounted IRS relay.

The conventional link is free-space loss referenced at ``d0`` with an extra
NLoS attenuation factor. The IRS link is the far-field reflected-path model:
loss grows with the product of the two hop distances and falls with the
square of the element counts, the unit-cell aperture and the cosines of the
incidence/reflection angles.

All parameter records validate themselves on construction, so a record that
exists is always evaluable. The one allowed limit is ``pt == 0``, for which
``evaluate_*`` report zero received power (``-inf`` dBm) and zero rate.
"""

import math
from dataclasses import asdict, dataclass

from .core import (
    SPEED_OF_LIGHT,
    Point3,
    db_to_linear,
    distance3,
    linear_to_db,
    watts_to_dbm,
    wavelength,
)
from .errors import (
    DegenerateGeometryError,
    InvalidParameterError,
    NumericDomainError,
    SingularAngleError,
)

_LN2 = math.log(2.0)
_SIXTY_FOUR_PI_CUBED = 64.0 * math.pi ** 3


def _number(name, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise InvalidParameterError(f"{name} must be a finite number, got {v!r}", name, v)
    return v


def _positive(name, v):
    if not _number(name, v) > 0:
        raise InvalidParameterError(f"{name} must be > 0, got {v!r}", name, v)


def _non_negative(name, v):
    if not _number(name, v) >= 0:
        raise InvalidParameterError(f"{name} must be >= 0, got {v!r}", name, v)


def _count(name, v):
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise InvalidParameterError(f"{name} must be an integer >= 1, got {v!r}", name, v)


def _angle(name, v):
    _number(name, v)
    if v == 90:
        raise SingularAngleError(f"{name} = 90 deg is singular (cos = 0)", name)
    if not 0 <= v < 90:
        raise InvalidParameterError(f"{name} must be in [0, 90) degrees, got {v!r}", name, v)


def _point(name, v):
    if not isinstance(v, Point3):
        raise InvalidParameterError(f"{name} must be a Point3, got {v!r}", name, v)


@dataclass(frozen=True)
class ConventionalLinkParams:
    """One UAV -> UE link. Power in W, frequency in Hz, distances in m."""

    fc: float
    pt: float
    u_nlos_db: float
    uav_pos: Point3
    ue_pos: Point3
    noise_dbm: float
    d0: float = 1.0

    def __post_init__(self):
        _positive("fc", self.fc)
        _non_negative("pt", self.pt)
        _non_negative("u_nlos_db", self.u_nlos_db)
        _positive("d0", self.d0)
        _number("noise_dbm", self.noise_dbm)
        _point("uav_pos", self.uav_pos)
        _point("ue_pos", self.ue_pos)
        if distance3(self.uav_pos, self.ue_pos) == 0:
            raise DegenerateGeometryError("uav_pos and ue_pos coincide", "ue_pos")

    @property
    def distance(self):
        return distance3(self.uav_pos, self.ue_pos)


@dataclass(frozen=True)
class IrsLinkParams:
    """One BS -> IRS -> UE link.

    Gains in dB, angles in degrees measured from the IRS normal, ``dx``/``dy``
    the unit-cell size in metres and ``a`` the reflection amplitude.
    """

    fc: float
    pt: float
    gt_db: float
    gr_db: float
    m: int
    n: int
    dx: float
    dy: float
    a: float
    theta_t_deg: float
    theta_r_deg: float
    bs_pos: Point3
    irs_pos: Point3
    ue_pos: Point3
    noise_dbm: float

    def __post_init__(self):
        _positive("fc", self.fc)
        _non_negative("pt", self.pt)
        _number("gt_db", self.gt_db)
        _number("gr_db", self.gr_db)
        _count("m", self.m)
        _count("n", self.n)
        _positive("dx", self.dx)
        _positive("dy", self.dy)
        _positive("a", self.a)
        if self.a > 1:
            raise InvalidParameterError(f"a must be in (0, 1], got {self.a!r}", "a", self.a)
        _angle("theta_t_deg", self.theta_t_deg)
        _angle("theta_r_deg", self.theta_r_deg)
        _number("noise_dbm", self.noise_dbm)
        _point("bs_pos", self.bs_pos)
        _point("irs_pos", self.irs_pos)
        _point("ue_pos", self.ue_pos)
        if distance3(self.bs_pos, self.irs_pos) == 0:
            raise DegenerateGeometryError("bs_pos and irs_pos coincide", "irs_pos")
        if distance3(self.irs_pos, self.ue_pos) == 0:
            raise DegenerateGeometryError("irs_pos and ue_pos coincide", "ue_pos")

    @property
    def wavelength(self):
        return wavelength(self.fc)


@dataclass(frozen=True)
class LinkMetrics:
    pl_db: float
    pr_dbm: float
    snr_db: float
    rate: float  # bits/s/Hz

    def as_dict(self):
        return asdict(self)


def _reference_gain(fc, d0):
    # K0 = (4 pi fc d0 / c)^2
    k = 4.0 * math.pi * fc * d0 / SPEED_OF_LIGHT
    return k * k


def _conventional_loss_linear(p):
    d = distance3(p.uav_pos, p.ue_pos)
    if d == 0:
        raise DegenerateGeometryError("UAV-UE distance is zero", "ue_pos")
    r = d / p.d0
    return _reference_gain(p.fc, p.d0) * r * r * db_to_linear(p.u_nlos_db)


def conventional_path_loss(p):
    """Path loss of the UAV -> UE link in dB."""
    return linear_to_db(_conventional_loss_linear(p))


def conventional_received_power(p):
    """Received power in dBm; requires ``pt > 0``."""
    if not p.pt > 0:
        raise NumericDomainError(f"received power in dBm needs pt > 0, got {p.pt!r}", "pt")
    return watts_to_dbm(p.pt / _conventional_loss_linear(p))


def snr(pr_dbm, noise_dbm):
    """SNR in dB as the difference of two dBm levels."""
    if math.isnan(pr_dbm) or math.isnan(noise_dbm):
        raise InvalidParameterError("SNR inputs must not be NaN")
    return pr_dbm - noise_dbm


def rate(snr_db):
    """Shannon spectral efficiency log2(1 + SNR) in bits/s/Hz.

    ``-inf`` dB (zero received power) maps to 0.
    """
    if math.isnan(snr_db) or snr_db == math.inf:
        raise InvalidParameterError(f"snr_db must be finite or -inf, got {snr_db!r}")
    if snr_db == -math.inf:
        return 0.0
    return math.log1p(10.0 ** (snr_db / 10.0)) / _LN2


def irs_scattering_gain(dx, dy, lam):
    """Aperture gain of one unit cell, 4 pi dx dy / lambda^2."""
    for name, v in (("dx", dx), ("dy", dy), ("lambda", lam)):
        if not (math.isfinite(v) and v > 0):
            raise NumericDomainError(f"{name} must be finite and > 0, got {v!r}", name)
    return 4.0 * math.pi * dx * dy / (lam * lam)


def _irs_loss_linear(p):
    cos_t = math.cos(math.radians(p.theta_t_deg))
    cos_r = math.cos(math.radians(p.theta_r_deg))
    if p.theta_t_deg >= 90 or cos_t <= 0:
        raise SingularAngleError(f"theta_t = {p.theta_t_deg} deg is singular", "theta_t_deg")
    if p.theta_r_deg >= 90 or cos_r <= 0:
        raise SingularAngleError(f"theta_r = {p.theta_r_deg} deg is singular", "theta_r_deg")
    d1 = distance3(p.bs_pos, p.irs_pos)
    d2 = distance3(p.irs_pos, p.ue_pos)
    if d1 == 0 or d2 == 0:
        raise DegenerateGeometryError("an IRS hop has zero length", "irs_pos")
    lam = wavelength(p.fc)
    g = irs_scattering_gain(p.dx, p.dy, lam)
    # Paired symmetric factors keep the result bitwise invariant when the
    # transmit and receive sides are exchanged.
    dd = d1 * d2
    mn = float(p.m * p.n)
    num = _SIXTY_FOUR_PI_CUBED * dd * dd
    den = (
        (db_to_linear(p.gt_db) * db_to_linear(p.gr_db))
        * g
        * (mn * mn)
        * (p.dx * p.dy)
        * (lam * lam)
        * (cos_t * cos_r)
        * (p.a * p.a)
    )
    return num / den


def irs_path_loss(p):
    """Path loss of the reflected BS -> IRS -> UE link in dB."""
    return linear_to_db(_irs_loss_linear(p))


def irs_received_power(p):
    """Received power through the IRS in dBm; requires ``pt > 0``."""
    if not p.pt > 0:
        raise NumericDomainError(f"received power in dBm needs pt > 0, got {p.pt!r}", "pt")
    return watts_to_dbm(p.pt / _irs_loss_linear(p))


def _sub(u, v):
    return (u.x - v.x, u.y - v.y, u.z - v.z)


def _angle_to(v, normal):
    norm = math.hypot(*v)
    if norm == 0:
        raise DegenerateGeometryError("direction vector has zero length")
    dot = v[0] * normal[0] + v[1] * normal[1] + v[2] * normal[2]
    cx = v[1] * normal[2] - v[2] * normal[1]
    cy = v[2] * normal[0] - v[0] * normal[2]
    cz = v[0] * normal[1] - v[1] * normal[0]
    return math.degrees(math.atan2(math.hypot(cx, cy, cz), dot))


def angles_from_geometry(bs, irs, ue, normal):
    """Incidence and reflection angles (degrees) of BS and UE w.r.t. the IRS normal.

    Returns ``(theta_t_deg, theta_r_deg)`` in [0, 180]. Values >= 90 mean the
    endpoint is behind or in the plane of the surface and cannot be fed to
    the IRS model.
    """
    normal = tuple(normal)
    if len(normal) != 3 or not all(math.isfinite(c) for c in normal):
        raise InvalidParameterError(f"normal must be a finite 3-vector, got {normal!r}", "normal")
    if abs(math.hypot(*normal) - 1.0) > 1e-9:
        raise InvalidParameterError("normal must have unit length", "normal", normal)
    return _angle_to(_sub(bs, irs), normal), _angle_to(_sub(ue, irs), normal)


def _metrics(pl_linear, pt, noise_dbm):
    pl_db = linear_to_db(pl_linear)
    if pt == 0:
        return LinkMetrics(pl_db, -math.inf, -math.inf, 0.0)
    pr_dbm = watts_to_dbm(pt / pl_linear)
    snr_db = snr(pr_dbm, noise_dbm)
    return LinkMetrics(pl_db, pr_dbm, snr_db, rate(snr_db))


def evaluate_conventional(p):
    return _metrics(_conventional_loss_linear(p), p.pt, p.noise_dbm)


def evaluate_irs(p):
    return _metrics(_irs_loss_linear(p), p.pt, p.noise_dbm)


def evaluate(p):
    """Dispatch to the model matching the parameter record type."""
    if isinstance(p, ConventionalLinkParams):
        return evaluate_conventional(p)
    if isinstance(p, IrsLinkParams):
        return evaluate_irs(p)
    raise TypeError(f"expected ConventionalLinkParams or IrsLinkParams, got {type(p).__name__}")
