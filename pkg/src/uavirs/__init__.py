"""Link-budget models for conventional UAV links and UAV-mounted IRS links."""

from .channel import (
    ConventionalLinkParams,
    IrsLinkParams,
    LinkMetrics,
    angles_from_geometry,
    conventional_path_loss,
    conventional_received_power,
    evaluate,
    evaluate_conventional,
    evaluate_irs,
    irs_path_loss,
    irs_received_power,
    irs_scattering_gain,
    rate,
    snr,
)
from .core import (
    SPEED_OF_LIGHT,
    Constants,
    Point3,
    db_to_linear,
    dbm_to_watts,
    distance3,
    linear_to_db,
    watts_to_dbm,
    wavelength,
)
from .errors import (
    ConfigurationError,
    DegenerateGeometryError,
    InvalidParameterError,
    LinkModelError,
    NumericDomainError,
    ScenarioParseError,
    SingularAngleError,
)
from .scenario_io import Scenario, load_scenario, write_csv, write_summary
from .sweep import ComparisonReport, SweepAxis, SweepTable, compare, run_sweep

__version__ = "0.1.0"
