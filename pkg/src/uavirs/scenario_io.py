"""Scenario files (YAML) and result writers (CSV tables, JSON summaries).

A scenario file looks like::

    name: fig6_9
    model: irs            # conventional | irs | compare
    irs:
      pt: 2
      theta_t: 45
      theta_r: 45
    sweep:
      - {kind: elements_joint, start: 10, stop: 200, step: 10}
    output:
      directory: out
      formats: [csv]

Any link parameter may also be given at the top level, in which case it
applies to every parameter block the model uses. Omitted parameters take
the defaults in ``CONVENTIONAL_DEFAULTS`` / ``IRS_DEFAULTS``; ``dx``/``dy``
accept ``lambda/2`` style expressions resolved against ``fc``.
"""

import copy
import csv
import io
import json
import math
import os
import re
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import yaml

from .channel import ConventionalLinkParams, IrsLinkParams
from .core import Point3, wavelength
from .errors import (
    ConfigurationError,
    InvalidParameterError,
    LinkModelError,
    NumericDomainError,
    ScenarioParseError,
)
from .sweep import SweepAxis, check_axes

MODELS = ("conventional", "irs", "compare")
OUTPUT_FORMATS = ("csv", "json")
METRIC_COLUMNS = ("pl_db", "pr_dbm", "snr_db", "rate_bps_hz")

CONVENTIONAL_DEFAULTS = {
    "fc": 100e9,
    "pt": 6.0,
    "u_nlos_db": 23.0,
    "d0": 1.0,
    "uav_pos": [0.0, 0.0, 40.0],
    "ue_pos": [100.0, 100.0, 1.5],
    "noise_dbm": -90.0,
}

IRS_DEFAULTS = {
    "fc": 100e9,
    "pt": 2.0,
    "gt_db": 20.0,
    "gr_db": 20.0,
    "m": 100,
    "n": 100,
    "dx": "lambda/2",
    "dy": "lambda/2",
    "a": 0.9,
    "theta_t": 45.0,
    "theta_r": 45.0,
    "bs_pos": [0.0, 0.0, 8.0],
    "irs_pos": [50.0, 50.0, 40.0],
    "ue_pos": [100.0, 100.0, 1.5],
    "noise_dbm": -90.0,
}

_BLOCK_DEFAULTS = {"conventional": CONVENTIONAL_DEFAULTS, "irs": IRS_DEFAULTS}
_BLOCKS_FOR_MODEL = {"conventional": ("conventional",), "irs": ("irs",), "compare": ("conventional", "irs")}
_TOP_KEYS = {"name", "model", "conventional", "irs", "sweep", "output"}
_PARAM_KEYS = set(CONVENTIONAL_DEFAULTS) | set(IRS_DEFAULTS)
# file key -> dataclass field, where they differ
_FIELD_NAMES = {"theta_t": "theta_t_deg", "theta_r": "theta_r_deg"}
_FILE_KEYS = {v: k for k, v in _FIELD_NAMES.items()}
_POSITION_KEYS = {"uav_pos", "ue_pos", "bs_pos", "irs_pos"}
_INT_KEYS = {"m", "n"}
_NAME_RE = re.compile(r"^[A-Za-z0-9_.-]+$")
_LAMBDA_RE = re.compile(
    r"^\s*(?:(?P<mul>\d+(?:\.\d*)?)\s*\*\s*)?lambda\s*(?:/\s*(?P<div>\d+(?:\.\d*)?))?\s*$"
)


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "."
    formats: tuple = ("csv",)


@dataclass(frozen=True)
class Scenario:
    name: str
    model: str
    conventional_params: Optional[ConventionalLinkParams] = None
    irs_params: Optional[IrsLinkParams] = None
    sweep_axes: tuple = ()
    output: OutputConfig = field(default_factory=OutputConfig)


class _UniqueKeyLoader(yaml.SafeLoader):
    pass


def _construct_mapping(loader, node, deep=False):
    seen = set()
    for key_node, _ in node.value:
        key = loader.construct_object(key_node, deep=deep)
        if key in seen:
            raise ScenarioParseError(f"duplicate key {key!r} (line {key_node.start_mark.line + 1})")
        seen.add(key)
    return loader.construct_mapping(node, deep=deep)


_UniqueKeyLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


def _invalid(path, msg, value=None):
    return InvalidParameterError(f"{path}: {msg}", path, value)


def _as_number(path, v):
    if isinstance(v, str):
        try:
            v = float(v)
        except ValueError:
            raise _invalid(path, f"expected a number, got {v!r}", v) from None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise _invalid(path, f"expected a number, got {v!r}", v)
    if not math.isfinite(v):
        raise _invalid(path, f"must be finite, got {v!r}", v)
    return v


def _as_float(path, v):
    return float(_as_number(path, v))


def _as_int(path, v):
    v = _as_number(path, v)
    if v != int(v):
        raise _invalid(path, f"expected an integer, got {v!r}", v)
    return int(v)


def _as_point(path, v):
    if not isinstance(v, (list, tuple)) or len(v) != 3:
        raise _invalid(path, f"expected [x, y, z], got {v!r}", v)
    return Point3(*(_as_float(f"{path}[{i}]", c) for i, c in enumerate(v)))


def _as_cell_size(path, v, fc):
    if isinstance(v, str):
        match = _LAMBDA_RE.match(v)
        if match:
            lam = wavelength(fc)
            mul = float(match["mul"]) if match["mul"] else 1.0
            div = float(match["div"]) if match["div"] else 1.0
            if div == 0:
                raise _invalid(path, "division by zero", v)
            return lam * mul / div
    return _as_float(path, v)


def _require_mapping(path, v):
    if not isinstance(v, dict):
        raise _invalid(path, f"expected a mapping, got {type(v).__name__}", v)
    return v


def _build_params(block, raw):
    path = block
    unknown = set(raw) - set(_BLOCK_DEFAULTS[block])
    if unknown:
        key = sorted(unknown)[0]
        raise _invalid(f"{path}.{key}", f"unknown parameter for the {block} model", raw[key])
    fc = _as_float(f"{path}.fc", raw["fc"])
    if not fc > 0:
        raise _invalid(f"{path}.fc", f"carrier frequency must be > 0 Hz, got {fc!r}", fc)
    kwargs = {}
    for key, v in raw.items():
        where = f"{path}.{key}"
        if key in _POSITION_KEYS:
            kwargs[key] = _as_point(where, v)
        elif key in _INT_KEYS:
            kwargs[key] = _as_int(where, v)
        elif key in ("dx", "dy"):
            kwargs[key] = _as_cell_size(where, v, fc)
        else:
            kwargs[_FIELD_NAMES.get(key, key)] = _as_float(where, v)
    if not kwargs["pt"] > 0:
        raise _invalid(f"{path}.pt", f"transmit power must be > 0 W, got {kwargs['pt']!r}", kwargs["pt"])
    cls = ConventionalLinkParams if block == "conventional" else IrsLinkParams
    try:
        return cls(**kwargs)
    except LinkModelError as exc:
        key = _FILE_KEYS.get(exc.field, exc.field) if getattr(exc, "field", None) else None
        where = f"{path}.{key}" if key else path
        if isinstance(exc, InvalidParameterError):
            raise _invalid(where, str(exc), exc.value) from None
        raise type(exc)(f"{where}: {exc}", where) from None


def _build_axes(raw, model):
    if raw is None:
        return ()
    if isinstance(raw, dict):
        raw = [raw]
    if not isinstance(raw, list):
        raise _invalid("sweep", "expected a list of axes", raw)
    axes = []
    for i, entry in enumerate(raw):
        path = f"sweep[{i}]"
        _require_mapping(path, entry)
        missing = {"kind", "start", "stop", "step"} - set(entry)
        extra = set(entry) - {"kind", "start", "stop", "step"}
        if missing or extra:
            key = sorted(missing or extra)[0]
            raise _invalid(f"{path}.{key}", "missing" if missing else "unknown key")
        try:
            axes.append(
                SweepAxis(
                    kind=entry["kind"],
                    start=_as_number(f"{path}.start", entry["start"]),
                    stop=_as_number(f"{path}.stop", entry["stop"]),
                    step=_as_number(f"{path}.step", entry["step"]),
                )
            )
        except ConfigurationError as exc:
            raise ConfigurationError(str(exc), f"{path}.{exc.field or 'kind'}") from None
    if axes:
        for m in _BLOCKS_FOR_MODEL[model]:
            check_axes(m, axes)
    return tuple(axes)


def _build_output(raw):
    if raw is None:
        return OutputConfig()
    _require_mapping("output", raw)
    extra = set(raw) - {"directory", "formats"}
    if extra:
        key = sorted(extra)[0]
        raise _invalid(f"output.{key}", "unknown key")
    directory = raw.get("directory", ".")
    if not isinstance(directory, str) or not directory:
        raise _invalid("output.directory", f"expected a path string, got {directory!r}", directory)
    formats = raw.get("formats", ["csv"])
    if isinstance(formats, str):
        formats = [formats]
    if not isinstance(formats, list) or not formats or any(f not in OUTPUT_FORMATS for f in formats):
        raise _invalid("output.formats", f"expected a non-empty subset of {list(OUTPUT_FORMATS)}", formats)
    return OutputConfig(directory=directory, formats=tuple(dict.fromkeys(formats)))


def scenario_from_dict(raw, default_name="scenario"):
    """Validate a raw mapping (as parsed from YAML) into a Scenario."""
    _require_mapping("<root>", raw)
    for key in raw:
        if key not in _TOP_KEYS and key not in _PARAM_KEYS:
            raise _invalid(str(key), "unknown key", raw[key])
    model = raw.get("model")
    if model not in MODELS:
        raise _invalid("model", f"expected one of {list(MODELS)}, got {model!r}", model)
    name = raw.get("name", default_name)
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise _invalid("name", f"must match {_NAME_RE.pattern}, got {name!r}", name)

    shared = {k: v for k, v in raw.items() if k in _PARAM_KEYS}
    needed = _BLOCKS_FOR_MODEL[model]
    for key in shared:
        if not any(key in _BLOCK_DEFAULTS[b] for b in needed):
            raise _invalid(key, f"parameter does not apply to model {model!r}", shared[key])

    params = {}
    for block in ("conventional", "irs"):
        if block not in needed and block not in raw:
            continue
        explicit = _require_mapping(block, raw.get(block) or {})
        merged = dict(_BLOCK_DEFAULTS[block])
        if block in needed:
            merged.update({k: v for k, v in shared.items() if k in merged})
        merged.update(explicit)
        params[block] = _build_params(block, merged)

    return Scenario(
        name=name,
        model=model,
        conventional_params=params.get("conventional"),
        irs_params=params.get("irs"),
        sweep_axes=_build_axes(raw.get("sweep"), model),
        output=_build_output(raw.get("output")),
    )


def read_raw(path):
    """Parse a scenario file into a plain mapping without validating it."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ScenarioParseError(f"{path}: not UTF-8 text ({exc})") from None
    try:
        raw = yaml.load(text, Loader=_UniqueKeyLoader)
    except ScenarioParseError as exc:
        raise ScenarioParseError(f"{path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ScenarioParseError(f"{path}: malformed YAML: {exc}") from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ScenarioParseError(f"{path}: top level must be a mapping")
    return raw


def load_scenario(path, overrides=()):
    """Load, override and validate a scenario file.

    ``overrides`` are ``key=value`` strings applied to the raw mapping before
    validation; see ``apply_overrides``.
    """
    raw = read_raw(path)
    raw = apply_overrides(raw, overrides)
    return scenario_from_dict(raw, default_name=Path(path).stem)


def _parse_override_value(text):
    try:
        v = yaml.safe_load(text)
    except yaml.YAMLError:
        return text
    if isinstance(v, str):
        for conv in (int, float):
            try:
                return conv(v)
            except ValueError:
                pass
    return v


def apply_overrides(raw, overrides):
    """Return a copy of ``raw`` with dotted ``key=value`` overrides applied.

    ``pt=2`` sets a top-level key, ``irs.theta_t=30`` a nested one and
    ``sweep.0.stop=50`` indexes into the axis list. Values are parsed as YAML
    scalars. Repeating a key is an error.
    """
    raw = copy.deepcopy(raw)
    seen = set()
    for item in overrides:
        key, sep, text = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise InvalidParameterError(f"override {item!r} is not key=value", item)
        if key in seen:
            raise InvalidParameterError(f"override key {key!r} given more than once", key)
        seen.add(key)
        parts = key.split(".")
        node = raw
        for i, part in enumerate(parts[:-1]):
            if isinstance(node, list):
                node = _list_slot(node, part, ".".join(parts[: i + 1]))
            else:
                nxt = node.get(part)
                if nxt is None:
                    nxt = node[part] = {}
                if not isinstance(nxt, (dict, list)):
                    raise InvalidParameterError(f"override {key!r}: {part!r} is not a section", key)
                node = nxt
        last = parts[-1]
        value = _parse_override_value(text)
        if isinstance(node, list):
            idx = _index(node, last, key, allow_append=True)
            if idx == len(node):
                node.append(value)
            else:
                node[idx] = value
        else:
            node[last] = value
    return raw


def _index(seq, part, key, allow_append=False):
    if not part.isdigit():
        raise InvalidParameterError(f"override {key!r}: expected a list index, got {part!r}", key)
    idx = int(part)
    if idx > len(seq) or (idx == len(seq) and not allow_append):
        raise InvalidParameterError(f"override {key!r}: index {idx} out of range", key)
    return idx


def _list_slot(seq, part, key):
    idx = _index(seq, part, key, allow_append=True)
    if idx == len(seq):
        seq.append({})
    if not isinstance(seq[idx], (dict, list)):
        raise InvalidParameterError(f"override {key!r} is not a section", key)
    return seq[idx]


def _params_to_dict(p):
    out = {}
    for key in _BLOCK_DEFAULTS["conventional" if isinstance(p, ConventionalLinkParams) else "irs"]:
        v = getattr(p, _FIELD_NAMES.get(key, key))
        out[key] = v.as_list() if isinstance(v, Point3) else v
    return out


def scenario_to_dict(scenario):
    """Fully explicit mapping for a Scenario; loading it back gives an equal Scenario."""
    out = {"name": scenario.name, "model": scenario.model}
    if scenario.conventional_params is not None:
        out["conventional"] = _params_to_dict(scenario.conventional_params)
    if scenario.irs_params is not None:
        out["irs"] = _params_to_dict(scenario.irs_params)
    if scenario.sweep_axes:
        out["sweep"] = [a.as_dict() for a in scenario.sweep_axes]
    out["output"] = {"directory": scenario.output.directory, "formats": list(scenario.output.formats)}
    return out


def _atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def save_scenario(scenario, path):
    text = yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False, default_flow_style=None)
    _atomic_write(path, text)


def bundled_scenario(name):
    """Path of a scenario shipped with the package, e.g. ``bundled_scenario("fig6_9")``."""
    entry = resources.files("uavirs") / "scenarios" / f"{name}.yaml"
    if not entry.is_file():
        raise FileNotFoundError(f"no bundled scenario named {name!r}")
    return Path(str(entry))


def bundled_scenario_names():
    folder = resources.files("uavirs") / "scenarios"
    return sorted(p.name[: -len(".yaml")] for p in folder.iterdir() if p.name.endswith(".yaml"))


def _fmt(v):
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    if not math.isfinite(v):
        raise NumericDomainError(f"refusing to write non-finite value {v!r}")
    return format(v, ".9g")


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_csv(table, path):
    """Write a SweepTable as CSV, plus ``<path>.skipped.csv`` if any point was skipped."""
    path = Path(path)
    rows = []
    for row in table.rows:
        m = row.metrics
        rows.append([_fmt(v) for v in row.values] + [_fmt(m.pl_db), _fmt(m.pr_dbm), _fmt(m.snr_db), _fmt(m.rate)])
    _atomic_write(path, _csv_text(list(table.axis_names) + list(METRIC_COLUMNS), rows))

    sidecar = path.with_name(path.name + ".skipped.csv")
    if table.skipped:
        skipped = [[_fmt(v) for v in s.values] + [s.reason] for s in table.skipped]
        _atomic_write(sidecar, _csv_text(list(table.axis_names) + ["reason"], skipped))
    elif sidecar.exists():
        sidecar.unlink()


def write_table_json(table, path):
    doc = {
        "axis_names": list(table.axis_names),
        "rows": [{"values": list(r.values), **r.metrics.as_dict()} for r in table.rows],
        "skipped": [{"values": list(s.values), "reason": s.reason} for s in table.skipped],
    }
    try:
        text = json.dumps(doc, indent=1, allow_nan=False) + "\n"
    except ValueError as exc:
        raise NumericDomainError(f"table contains non-finite values: {exc}") from None
    _atomic_write(path, text)


def summary_dict(report, scenario=None):
    return {
        "delta_pl_db": report.delta_pl_db,
        "rate_ratio": report.rate_ratio,
        "headline": f"delta_pl_db={report.delta_pl_db:.3f} dB rate_ratio={report.rate_ratio:.3f}",
        "conventional": report.conventional.as_dict(),
        "irs": report.irs.as_dict(),
        "scenario": scenario_to_dict(scenario) if scenario is not None else None,
    }


def write_summary(report, path, scenario=None):
    """Write a ComparisonReport as JSON with stable, sorted keys."""
    try:
        text = json.dumps(summary_dict(report, scenario), indent=2, sort_keys=True, allow_nan=False) + "\n"
    except ValueError as exc:
        raise NumericDomainError(f"report contains non-finite values: {exc}") from None
    _atomic_write(path, text)
