"""Grid sweeps over one or two parameters and single-point model comparison."""

import dataclasses
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

from .channel import ConventionalLinkParams, IrsLinkParams, LinkMetrics, evaluate
from .errors import (
    ConfigurationError,
    DegenerateGeometryError,
    InvalidParameterError,
    LinkModelError,
    NumericDomainError,
    SingularAngleError,
)

AXIS_KINDS = (
    "ue_position_x",
    "ue_position_y",
    "irs_position_x",
    "irs_position_y",
    "theta_t",
    "theta_r",
    "theta_joint",
    "elements_m",
    "elements_n",
    "elements_joint",
)
ANGLE_AXES = {"theta_t", "theta_r", "theta_joint"}
ELEMENT_AXES = {"elements_m", "elements_n", "elements_joint"}
CONVENTIONAL_AXES = {"ue_position_x", "ue_position_y"}

# parameter fields each axis writes; used to reject overlapping axis pairs
_AXIS_TARGETS = {
    "ue_position_x": {"ue_pos.x"},
    "ue_position_y": {"ue_pos.y"},
    "irs_position_x": {"irs_pos.x"},
    "irs_position_y": {"irs_pos.y"},
    "theta_t": {"theta_t_deg"},
    "theta_r": {"theta_r_deg"},
    "theta_joint": {"theta_t_deg", "theta_r_deg"},
    "elements_m": {"m"},
    "elements_n": {"n"},
    "elements_joint": {"m", "n"},
}

# relative slack when deciding whether stop lies on the grid
_GRID_EPS = 1e-9


@dataclass(frozen=True)
class SweepAxis:
    """Inclusive grid ``start, start + step, ...`` up to ``stop``."""

    kind: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.kind not in AXIS_KINDS:
            raise ConfigurationError(
                f"unknown sweep axis kind {self.kind!r}; expected one of {', '.join(AXIS_KINDS)}",
                "kind",
            )
        for name in ("start", "stop", "step"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigurationError(f"{self.kind}.{name} must be a finite number, got {v!r}", name)
        if self.step <= 0:
            raise ConfigurationError(f"{self.kind}.step must be > 0, got {self.step!r}", "step")
        if self.start > self.stop:
            raise ConfigurationError(
                f"{self.kind}: start {self.start!r} exceeds stop {self.stop!r}", "start"
            )
        if self.kind in ELEMENT_AXES:
            for name in ("start", "stop", "step"):
                v = getattr(self, name)
                if v != int(v):
                    raise ConfigurationError(
                        f"{self.kind}.{name} must be integer-valued, got {v!r}", name
                    )
            if self.start < 1:
                raise ConfigurationError(f"{self.kind}.start must be >= 1, got {self.start!r}", "start")
        if self.kind in ANGLE_AXES and self.start < 0:
            raise ConfigurationError(f"{self.kind}.start must be >= 0 degrees, got {self.start!r}", "start")

    def values(self):
        """Grid samples, generated from an integer index so they never drift."""
        if self.kind in ELEMENT_AXES:
            start, stop, step = int(self.start), int(self.stop), int(self.step)
            return list(range(start, stop + 1, step))
        count = int(math.floor((self.stop - self.start) / self.step * (1 + _GRID_EPS) + _GRID_EPS)) + 1
        out = []
        for i in range(count):
            v = self.start + i * self.step
            out.append(min(float(v), float(self.stop)))
        return out

    def as_dict(self):
        return dataclasses.asdict(self)


class SweepRow(NamedTuple):
    values: tuple
    metrics: LinkMetrics


class SkippedPoint(NamedTuple):
    values: tuple
    reason: str


@dataclass
class SweepTable:
    axis_names: tuple
    rows: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def column(self, name):
        """Values of one metric (``pl_db``, ``pr_dbm``, ``snr_db``, ``rate``) down the table."""
        return [getattr(r.metrics, name) for r in self.rows]


@dataclass(frozen=True)
class ComparisonReport:
    delta_pl_db: float
    rate_ratio: float
    conventional: LinkMetrics
    irs: LinkMetrics


def _model_name(base):
    if isinstance(base, ConventionalLinkParams):
        return "conventional"
    if isinstance(base, IrsLinkParams):
        return "irs"
    raise ConfigurationError(f"unsupported base parameter type {type(base).__name__}")


def check_axes(model, axes):
    """Raise ConfigurationError unless ``axes`` can drive ``model``."""
    if not 1 <= len(axes) <= 2:
        raise ConfigurationError(f"a sweep takes 1 or 2 axes, got {len(axes)}", "sweep")
    written = set()
    for axis in axes:
        if not isinstance(axis, SweepAxis):
            raise ConfigurationError(f"expected SweepAxis, got {axis!r}", "sweep")
        if model == "conventional" and axis.kind not in CONVENTIONAL_AXES:
            raise ConfigurationError(
                f"axis {axis.kind!r} does not apply to the conventional model", "sweep"
            )
        targets = _AXIS_TARGETS[axis.kind]
        if written & targets:
            raise ConfigurationError(f"axis {axis.kind!r} overlaps another axis", "sweep")
        written |= targets


def _with_coord(point, coord, value):
    return dataclasses.replace(point, **{coord: float(value)})


def substitute(base, kind, value):
    """Return ``base`` with one axis value written into it."""
    if kind == "ue_position_x":
        return dataclasses.replace(base, ue_pos=_with_coord(base.ue_pos, "x", value))
    if kind == "ue_position_y":
        return dataclasses.replace(base, ue_pos=_with_coord(base.ue_pos, "y", value))
    if kind == "irs_position_x":
        return dataclasses.replace(base, irs_pos=_with_coord(base.irs_pos, "x", value))
    if kind == "irs_position_y":
        return dataclasses.replace(base, irs_pos=_with_coord(base.irs_pos, "y", value))
    if kind == "theta_t":
        return dataclasses.replace(base, theta_t_deg=value)
    if kind == "theta_r":
        return dataclasses.replace(base, theta_r_deg=value)
    if kind == "theta_joint":
        return dataclasses.replace(base, theta_t_deg=value, theta_r_deg=value)
    if kind == "elements_m":
        return dataclasses.replace(base, m=value)
    if kind == "elements_n":
        return dataclasses.replace(base, n=value)
    if kind == "elements_joint":
        return dataclasses.replace(base, m=value, n=value)
    raise ConfigurationError(f"unknown sweep axis kind {kind!r}")


def _reason(exc):
    if isinstance(exc, SingularAngleError):
        code = "singular-angle"
    elif isinstance(exc, DegenerateGeometryError):
        code = "degenerate-geometry"
    elif isinstance(exc, NumericDomainError):
        code = "numeric-domain"
    elif isinstance(exc, InvalidParameterError):
        code = "invalid-parameter"
    else:
        code = "error"
    return f"{code}: {exc}"


def _evaluate_point(base, kinds, values):
    try:
        p = base
        for kind, v in zip(kinds, values):
            p = substitute(p, kind, v)
        return evaluate(p)
    except LinkModelError as exc:
        return _reason(exc)


def _evaluate_chunk(args):
    base, kinds, chunk = args
    return [_evaluate_point(base, kinds, values) for values in chunk]


def run_sweep(base, axes, workers=1):
    """Evaluate ``base`` at every grid point spanned by ``axes``.

    Points that violate a model constraint (90 degree angles, coincident
    endpoints) are collected in ``skipped`` instead of aborting the run.
    Rows come out in row-major order of the axis values regardless of
    ``workers``.
    """
    model = _model_name(base)
    axes = list(axes) if not isinstance(axes, SweepAxis) else [axes]
    check_axes(model, axes)
    kinds = tuple(a.kind for a in axes)
    grid = list(itertools.product(*(a.values() for a in axes)))
    if not grid:
        raise ConfigurationError("sweep grid is empty", "sweep")

    if workers is None or workers <= 1 or len(grid) < 2:
        results = [_evaluate_point(base, kinds, values) for values in grid]
    else:
        size = math.ceil(len(grid) / (workers * 4))
        chunks = [(base, kinds, grid[i:i + size]) for i in range(0, len(grid), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(_evaluate_chunk, chunks) for r in part]

    table = SweepTable(axis_names=kinds)
    for values, result in zip(grid, results):
        if isinstance(result, LinkMetrics):
            table.rows.append(SweepRow(values, result))
        else:
            table.skipped.append(SkippedPoint(values, result))
    return table


def compare(conv, irs):
    """Evaluate two links and report ``conv PL - irs PL`` and ``irs rate / conv rate``.

    Either argument may be either parameter type; swapping them flips the
    sign of the PL gap and inverts the rate ratio.
    """
    if conv.noise_dbm != irs.noise_dbm:
        raise ConfigurationError(
            f"compared links must share a noise floor ({conv.noise_dbm} vs {irs.noise_dbm} dBm)",
            "noise_dbm",
        )
    m_conv = evaluate(conv)
    m_irs = evaluate(irs)
    if m_conv.rate == 0:
        raise NumericDomainError("rate ratio undefined: reference link has zero rate", "pt")
    return ComparisonReport(
        delta_pl_db=m_conv.pl_db - m_irs.pl_db,
        rate_ratio=m_irs.rate / m_conv.rate,
        conventional=m_conv,
        irs=m_irs,
    )
