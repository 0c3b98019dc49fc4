"""Command-line interface.

Subcommands:

* ``bias``      biases of both estimators for one scenario
* ``ratio``     |adjusted| / |unadjusted| for one scenario
* ``simulate``  Monte-Carlo estimate of a bias with its standard error
* ``sweep``     evaluate a scenario grid and write it as CSV
* ``region``    share of a feasible grid satisfying a predicate
* ``figures``   write every figure dataset plus figstats.csv
* ``parse``     check a .sem model file and print its implied covariance

Scenarios come from a file (``--scenario``), inline ``--set key=value``
pairs, or both; inline values override the file.  All numeric output uses
12 significant digits.  Exit codes: 0 success, 2 validation or parse
failure, 3 undefined estimator, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import formulas, sem
from .errors import (
    ColliderLabError,
    DomainError,
    EmptyRegionError,
    ParseError,
    RangeError,
    RealizabilityError,
    SimulationError,
    UndefinedEstimatorError,
    ValidationError,
)
from .figure_data import write_figure_datasets
from .scenarios import Scenario, scenario_from_mapping, scenario_mapping_from_text
from .simulate import SimConfig, estimate_bias
from .sweep import (
    ADJUSTED_SMALLER,
    GridAxis,
    GridSpec,
    Predicate,
    abs_below,
    below_min_frac,
    emit_csv,
    format_value,
    predicate_mask,
    region_fraction,
    run_sweep,
)

__all__ = ["main"]

_FORMATS = ("text", "csv", "json-lines")


# --- output ---------------------------------------------------------------


def _cell(value) -> str:
    if isinstance(value, float):
        return format_value(value)
    return str(value)


def _json_cell(value) -> str:
    # %.12g strings are valid JSON numbers; never NaN or infinity here.
    if isinstance(value, float):
        return format_value(value)
    if isinstance(value, int):
        return str(value)
    return json.dumps(value)


def _emit(fmt: str, header: list[str], rows: list[list]) -> None:
    lines: list[str] = []
    if fmt == "csv":
        lines.append(",".join(header))
        lines.extend(",".join(_cell(v) for v in row) for row in rows)
    elif fmt == "json-lines":
        for row in rows:
            body = ", ".join(
                f"{json.dumps(k)}: {_json_cell(v)}" for k, v in zip(header, row)
            )
            lines.append("{" + body + "}")
    else:
        lines.extend(
            " ".join(f"{k}={_cell(v)}" for k, v in zip(header, row)) for row in rows
        )
    sys.stdout.write("\n".join(lines) + "\n")


# --- argument parsing helpers ----------------------------------------------


def _load_scenario(args) -> Scenario:
    directives: dict[str, str] = {}
    if args.scenario is not None:
        with open(args.scenario, "r", encoding="utf-8") as handle:
            directives.update(scenario_mapping_from_text(handle.read()))
    for item in args.set or ():
        key, eq, value = item.partition("=")
        if not eq or not key.strip():
            raise ParseError(f"--set expects key=value, got {item!r}")
        directives[key.strip()] = value.strip()
    if not directives:
        raise ParseError("no scenario given; use --scenario FILE and/or --set key=value")
    return scenario_from_mapping(directives)


def _parse_axis(text: str) -> GridAxis:
    parts = text.split(":")
    if len(parts) != 4:
        raise ParseError(f"--axis expects name:lo:hi:points, got {text!r}")
    name, lo, hi, points = parts
    try:
        return GridAxis(name, float(lo), float(hi), int(points))
    except ValueError as exc:
        if isinstance(exc, ColliderLabError):
            raise
        raise ParseError(f"bad --axis value {text!r}: {exc}") from None


def _parse_tie(text: str) -> tuple[str, tuple[str, float]]:
    param, eq, rhs = text.partition("=")
    if not eq or not param.strip() or not rhs.strip():
        raise ParseError(f"--tie expects param=axis or param=mult*axis, got {text!r}")
    mult_text, star, axis = rhs.partition("*")
    if not star:
        return param.strip(), (rhs.strip(), 1.0)
    try:
        mult = float(mult_text)
    except ValueError:
        raise ParseError(f"bad tie multiplier in {text!r}") from None
    if not axis.strip():
        raise ParseError(f"--tie expects param=mult*axis, got {text!r}")
    return param.strip(), (axis.strip(), mult)


def _parse_fix(text: str) -> tuple[str, float]:
    param, eq, value = text.partition("=")
    if not eq or not param.strip():
        raise ParseError(f"--fix expects param=value, got {text!r}")
    try:
        return param.strip(), float(value)
    except ValueError:
        raise ParseError(f"bad fixed value in {text!r}") from None


def _parse_predicate(text: str) -> Predicate:
    name, eq, value = text.partition("=")
    name = name.strip()
    if name == "adjusted_smaller":
        if eq:
            raise ParseError("adjusted_smaller takes no value")
        return ADJUSTED_SMALLER
    if name in ("abs_below", "below_min_frac"):
        if not eq:
            raise ParseError(f"{name} needs a value, e.g. {name}=0.01")
        try:
            number = float(value)
        except ValueError:
            raise ParseError(f"bad predicate value in {text!r}") from None
        return abs_below(number) if name == "abs_below" else below_min_frac(number)
    raise ParseError(
        f"unknown predicate {name!r}; choose adjusted_smaller, abs_below=X or below_min_frac=X"
    )


def _grid_spec(args) -> GridSpec:
    axes = tuple(_parse_axis(a) for a in args.axis or ())
    ties = dict(_parse_tie(t) for t in args.tie or ())
    fixed = dict(_parse_fix(f) for f in args.fix or ())
    return GridSpec(args.family, axes, ties, fixed)


# --- subcommands ------------------------------------------------------------


def _cmd_bias(args) -> int:
    scenario = _load_scenario(args)
    estimators = ("unadjusted", "adjusted") if args.estimator == "both" else (args.estimator,)
    rows: list[list] = []
    for estimator in estimators:
        if args.engine in ("closed", "both"):
            result = formulas.bias(scenario, estimator, paper_literal=args.paper_literal)
            rows.append([result.estimator, result.method, result.value])
        if args.engine in ("sem", "both"):
            value = sem.scenario_bias(scenario, estimator)
            rows.append([estimator, "sem_engine", value])
    _emit(args.format, ["estimator", "method", "value"], rows)
    return 0


def _cmd_ratio(args) -> int:
    scenario = _load_scenario(args)
    _emit(args.format, ["ratio"], [[formulas.bias_ratio(scenario)]])
    return 0


def _cmd_simulate(args) -> int:
    scenario = _load_scenario(args)
    config = SimConfig(n=args.n, seed=args.seed, include_intercept=not args.no_intercept)
    estimators = ("unadjusted", "adjusted") if args.estimator == "both" else (args.estimator,)
    rows = []
    for estimator in estimators:
        result = estimate_bias(scenario, estimator, config)
        rows.append(
            [result.estimator, result.bias_estimate, result.std_error,
             result.n_samples, result.seed]
        )
    _emit(args.format, ["estimator", "bias_estimate", "std_error", "n", "seed"], rows)
    return 0


def _cmd_sweep(args) -> int:
    table = run_sweep(_grid_spec(args))
    emit_csv(table, args.out)
    sys.stdout.write(f"{args.out}\n")
    return 0


def _cmd_region(args) -> int:
    predicate = _parse_predicate(args.predicate)
    table = run_sweep(_grid_spec(args))
    fraction = region_fraction(table, predicate)
    hits = int((predicate_mask(table, predicate) & table.feasible).sum())
    rows = [[predicate.label(), fraction, int(table.feasible.sum()), hits]]
    _emit(args.format, ["predicate", "fraction", "n_feasible", "n_hits"], rows)
    return 0


def _cmd_figures(args) -> int:
    paths = write_figure_datasets(
        args.out,
        points_1d=args.points_1d,
        points_2d=args.points_2d,
        stats_points_2d=args.stats_points,
    )
    sys.stdout.write("\n".join(str(p) for p in paths) + "\n")
    return 0


def _cmd_parse(args) -> int:
    model = sem.parse_sem_file(args.file)
    cov = sem.implied_covariance(model)
    names = list(cov.variables)
    rows = [[name, *(float(x) for x in cov.matrix[i])] for i, name in enumerate(names)]
    _emit(args.format, ["variable", *names], rows)
    return 0


# --- parser -----------------------------------------------------------------


def _add_scenario_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--scenario", metavar="FILE", help="scenario file (one key = value per line)")
    sub.add_argument(
        "--set",
        metavar="KEY=VALUE",
        action="append",
        help="set or override a scenario key (repeatable; wins over the file)",
    )


def _add_format_option(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=_FORMATS, default="text", help="output format")


def _add_grid_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--family", required=True, help="scenario family to sweep")
    sub.add_argument(
        "--axis",
        metavar="NAME:LO:HI:POINTS",
        action="append",
        required=True,
        help="grid axis (one or two)",
    )
    sub.add_argument(
        "--tie",
        metavar="PARAM=[MULT*]AXIS",
        action="append",
        help="tie a parameter to an axis, optionally scaled (repeatable)",
    )
    sub.add_argument(
        "--fix", metavar="PARAM=VALUE", action="append", help="fix a parameter (repeatable)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collider-lab",
        description="Asymptotic bias of adjusted and unadjusted estimators "
        "in M and butterfly structures.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    bias = commands.add_parser("bias", help="closed-form (and optionally SEM-engine) biases")
    _add_scenario_options(bias)
    bias.add_argument("--estimator", choices=("unadjusted", "adjusted", "both"), default="both")
    bias.add_argument(
        "--engine",
        choices=("closed", "sem", "both"),
        default="closed",
        help="closed form, covariance engine, or both (cross-check)",
    )
    bias.add_argument(
        "--paper-literal",
        action="store_true",
        help="binary_m only: the adjusted variant with the spurious rho factor "
        "(audit negative control; ignored by the engine)",
    )
    _add_format_option(bias)
    bias.set_defaults(handler=_cmd_bias)

    ratio = commands.add_parser("ratio", help="|adjusted bias| / |unadjusted bias|")
    _add_scenario_options(ratio)
    _add_format_option(ratio)
    ratio.set_defaults(handler=_cmd_ratio)

    simulate = commands.add_parser("simulate", help="Monte-Carlo bias estimate")
    _add_scenario_options(simulate)
    simulate.add_argument("--estimator", choices=("unadjusted", "adjusted", "both"), default="both")
    simulate.add_argument("--n", type=int, default=100_000, help="sample size (default 100000)")
    simulate.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    simulate.add_argument(
        "--no-intercept", action="store_true", help="fit the regressions without an intercept"
    )
    _add_format_option(simulate)
    simulate.set_defaults(handler=_cmd_simulate)

    sweep = commands.add_parser("sweep", help="evaluate a grid and write CSV")
    _add_grid_options(sweep)
    sweep.add_argument("--out", "-o", required=True, metavar="FILE", help="output CSV path")
    sweep.set_defaults(handler=_cmd_sweep)

    region = commands.add_parser("region", help="feasible-share of a predicate over a grid")
    _add_grid_options(region)
    region.add_argument(
        "--predicate",
        required=True,
        metavar="PRED",
        help="adjusted_smaller, abs_below=X or below_min_frac=X",
    )
    _add_format_option(region)
    region.set_defaults(handler=_cmd_region)

    figures = commands.add_parser("figures", help="write all figure datasets")
    figures.add_argument("--out", "-o", required=True, metavar="DIR", help="output directory")
    figures.add_argument("--points-1d", type=int, default=1000, help="curve resolution")
    figures.add_argument("--points-2d", type=int, default=201, help="plane plot resolution")
    figures.add_argument(
        "--stats-points", type=int, default=1000, help="plane resolution for quoted fractions"
    )
    figures.set_defaults(handler=_cmd_figures)

    parse = commands.add_parser("parse", help="validate a .sem file, print implied covariance")
    parse.add_argument("file", help="model description (.sem)")
    _add_format_option(parse)
    parse.set_defaults(handler=_cmd_parse)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, ValidationError, DomainError, RangeError,
            RealizabilityError, EmptyRegionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UndefinedEstimatorError, SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
