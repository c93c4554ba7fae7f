"""Command line entry point: ``uavirs {eval,sweep,compare,defaults}``.

Exit codes: 0 success, 1 validation/configuration error, 2 I/O error,
3 numeric-domain error (singular angle, coincident endpoints, ...).
Data and written paths go to stdout, diagnostics to stderr.
"""

import argparse
import logging
import sys
from pathlib import Path

from . import scenario_io
from .channel import evaluate
from .errors import (
    ConfigurationError,
    InvalidParameterError,
    NumericDomainError,
    ScenarioParseError,
)
from .sweep import compare, run_sweep

log = logging.getLogger("uavirs")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_DOMAIN = 3


def _fmt(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(c) for c in v) + "]"
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def _print_block(title, mapping, out):
    print(f"[{title}]", file=out)
    for key, v in mapping.items():
        print(f"{key}={_fmt(v)}", file=out)


def _resolve_scenario(arg):
    path = Path(arg)
    if path.exists() or path.suffix:
        return path
    # bare names fall back to the bundled figure scenarios
    try:
        return scenario_io.bundled_scenario(arg)
    except FileNotFoundError:
        return path


def _load(args):
    if not args.scenario:
        raise InvalidParameterError("--scenario is required for this command", "scenario")
    return scenario_io.load_scenario(_resolve_scenario(args.scenario), args.set or ())


def _out_dir(args, scenario):
    out = Path(args.out if args.out else scenario.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_defaults(args, out):
    _print_block("conventional", scenario_io.CONVENTIONAL_DEFAULTS, out)
    _print_block("irs", scenario_io.IRS_DEFAULTS, out)


def cmd_eval(args, out):
    scenario = _load(args)
    for title, p in (("conventional", scenario.conventional_params), ("irs", scenario.irs_params)):
        if p is not None and (scenario.model in (title, "compare")):
            _print_block(title, evaluate(p).as_dict(), out)


def cmd_sweep(args, out):
    scenario = _load(args)
    if not scenario.sweep_axes:
        raise ConfigurationError("scenario defines no sweep axes", "sweep")
    out_dir = _out_dir(args, scenario)
    bases = [("conventional", scenario.conventional_params), ("irs", scenario.irs_params)]
    bases = [(t, p) for t, p in bases if p is not None and scenario.model in (t, "compare")]
    for title, base in bases:
        table = run_sweep(base, scenario.sweep_axes, workers=args.workers)
        stem = scenario.name if scenario.model != "compare" else f"{scenario.name}_{title}"
        log.info("%s: %d rows, %d skipped", stem, len(table.rows), len(table.skipped))
        if "csv" in scenario.output.formats:
            path = out_dir / f"{stem}.csv"
            scenario_io.write_csv(table, path)
            print(path, file=out)
            if table.skipped:
                print(path.with_name(path.name + ".skipped.csv"), file=out)
        if "json" in scenario.output.formats:
            path = out_dir / f"{stem}.json"
            scenario_io.write_table_json(table, path)
            print(path, file=out)


def cmd_compare(args, out):
    scenario = _load(args)
    if scenario.model != "compare":
        raise ConfigurationError(
            f"compare needs a scenario with model: compare, got {scenario.model!r}", "model"
        )
    report = compare(scenario.conventional_params, scenario.irs_params)
    path = _out_dir(args, scenario) / f"{scenario.name}_summary.json"
    scenario_io.write_summary(report, path, scenario)
    print(path, file=out)


COMMANDS = {
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "defaults": cmd_defaults,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uavirs",
        description="Link budgets for conventional UAV links and UAV-mounted IRS links.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--scenario", help="scenario YAML file, or the name of a bundled scenario")
    parser.add_argument("--out", help="output directory (default: the scenario's output.directory)")
    parser.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="override a scenario field, e.g. --set irs.theta_t=30 (repeatable)",
    )
    parser.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed its message
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=stderr,
                        format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args, stdout)
    except NumericDomainError as exc:
        print(f"error: numeric domain: {exc}", file=stderr)
        return EXIT_DOMAIN
    except (InvalidParameterError, ConfigurationError, ScenarioParseError) as exc:
        print(f"error: invalid scenario: {exc}", file=stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: I/O: {exc}", file=stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
