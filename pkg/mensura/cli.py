#!/usr/bin/env python

"""
    mensura

    Dimensional analysis and regression for tree volume: the Black Cherry
    analysis end to end, plots, Pi bases, volume models and variance budgets
    from the command line.
"""

import argparse
import logging
import math
import os
import sys

import asteval

import mensura

from . import config as mensura_config
from . import data, geometry, pi, plugins, propagate, report
from .plugins import svg
from .units import INCH, Quantity, convert, parse_unit_expr
from .util import (
    MensuraError,
    NumericalError,
    UsageError,
    error_line,
    warning_line,
)

log = logging.getLogger(__name__)
logging.getLogger("asteval").setLevel(logging.WARNING)

VOLUME_MODELS = ("cylinder", "cone", "frustum", "honer", "cubic", "smalian")


def _common_flags():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        metavar="TYPE",
        dest="format",
        choices=plugins.EXPORT_FORMATS,
        default=None,
        help="Output format. TYPE can be {}.".format(
            plugins.util.oxford_list(plugins.EXPORT_FORMATS)
        ),
    )
    common.add_argument(
        "--out",
        metavar="DIR",
        dest="out",
        default=None,
        help="Write results into this directory instead of printing them",
    )
    common.add_argument(
        "--standard-delta",
        dest="standard_delta",
        action="store_true",
        help="Use the factor 2 of the delta method on the d-h cross term",
    )
    common.add_argument(
        "--config",
        dest="config",
        metavar="PATH",
        help="Read settings from this YAML file",
    )
    common.add_argument(
        "-d", "--debug", dest="debug", action="store_true", help="execute in debug mode"
    )
    return common


def _dataset_flags():
    flags = argparse.ArgumentParser(add_help=False)
    group = flags.add_argument_group("Dataset")
    source = group.add_mutually_exclusive_group()
    source.add_argument(
        "--builtin",
        dest="builtin",
        choices=sorted(data.BUILTIN_DATASETS),
        help="Use a built in dataset (default: cherry)",
    )
    source.add_argument(
        "--csv", dest="csv", metavar="PATH", help="Read a dbh,height,volume CSV file"
    )
    group.add_argument("--dbh-unit", dest="dbh_unit", default="in", metavar="UNIT")
    group.add_argument(
        "--height-unit", dest="height_unit", default="ft", metavar="UNIT"
    )
    group.add_argument(
        "--volume-unit", dest="volume_unit", default="ft3", metavar="UNIT"
    )
    return flags


def _error_model_flags():
    flags = argparse.ArgumentParser(add_help=False)
    group = flags.add_argument_group("Error model")
    group.add_argument(
        "--cv-d", dest="cv_d", type=float, help="coefficient of variation of d"
    )
    group.add_argument(
        "--cv-h", dest="cv_h", type=float, help="coefficient of variation of h"
    )
    group.add_argument(
        "--rho", dest="rho_dh", type=float, help="correlation of d and h errors"
    )
    group.add_argument(
        "--level",
        dest="level",
        type=float,
        help="confidence level of the ellipsoid tests",
    )
    return flags


def parse_args(args=None):
    common = _common_flags()
    dataset = _dataset_flags()
    error_model = _error_model_flags()

    parser = argparse.ArgumentParser(prog="mensura")
    parser.add_argument(
        "-v",
        "--version",
        dest="version",
        action="store_true",
        help="prints version information and exits",
    )
    subcommands = parser.add_subparsers(dest="command", metavar="COMMAND")

    analyze = subcommands.add_parser(
        "analyze",
        parents=[common, dataset, error_model],
        help="Run the full analysis of a dataset",
    )
    analyze.add_argument(
        "--paper-reference",
        dest="paper_reference",
        choices=report.PAPER_REFERENCES,
        help="Published numbers to compare against (default: cherry for the "
        "built in data, none for CSV input)",
    )

    plot = subcommands.add_parser(
        "plot",
        parents=[common, dataset, error_model],
        help="Write an SVG plot and its CSV",
    )
    plot.add_argument(
        "kind",
        choices=svg.PLOT_KINDS,
        metavar="KIND",
        help="KIND can be {}".format(plugins.util.oxford_list(svg.PLOT_KINDS)),
    )
    plot.add_argument(
        "--formulation",
        dest="formulation",
        default="a",
        choices=sorted(pi.TREE_FORMULATIONS),
        help="Formulation for pi-scatter",
    )
    plot.add_argument(
        "--gamma0", dest="gamma0", type=float, help="Volume coefficient for contours"
    )

    pi_parser = subcommands.add_parser(
        "pi",
        parents=[common],
        help="Dimensionless groups for variables written name:dims",
    )
    pi_parser.add_argument("variables", nargs="+", metavar="NAME:DIMS")

    volume = subcommands.add_parser(
        "volume", parents=[common], help="Evaluate a stem volume model"
    )
    volume.add_argument(
        "--model", dest="model", choices=VOLUME_MODELS, default="frustum"
    )
    volume.add_argument("--dbh", dest="dbh", type=float, help="diameter in --dbh-unit")
    volume.add_argument(
        "--height", dest="height", type=float, help="height in --height-unit"
    )
    volume.add_argument("--dbh-unit", dest="dbh_unit", default="in", metavar="UNIT")
    volume.add_argument(
        "--height-unit", dest="height_unit", default="ft", metavar="UNIT"
    )
    volume.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        help="top/bottom diameter ratio of a frustum",
    )
    volume.add_argument(
        "--k", dest="k", type=float, help="coefficient of the cubic model"
    )
    volume.add_argument(
        "--diameters",
        dest="diameters",
        type=float,
        nargs="+",
        help="log end diameters in --dbh-unit, base to top (smalian)",
    )
    volume.add_argument(
        "--log-length",
        dest="log_length",
        type=float,
        default=geometry.STANDARD_LOG_LENGTH_FT,
        help="log length in --height-unit (smalian)",
    )

    propagate_parser = subcommands.add_parser(
        "propagate",
        parents=[common, error_model],
        help="Variance budget of V = gamma0 h d^2 at one tree",
    )
    propagate_parser.add_argument("--dbh", dest="dbh", type=float, required=True)
    propagate_parser.add_argument("--height", dest="height", type=float, required=True)
    propagate_parser.add_argument(
        "--dbh-unit", dest="dbh_unit", default="ft", metavar="UNIT"
    )
    propagate_parser.add_argument(
        "--height-unit", dest="height_unit", default="ft", metavar="UNIT"
    )
    propagate_parser.add_argument("--gamma0", dest="gamma0", type=float)

    rss = subcommands.add_parser(
        "rss",
        parents=[common, dataset],
        help="Prediction RSS of a volume model written in d, h (ft) and d_in (in)",
    )
    rss.add_argument("--model", dest="model", required=True, metavar="EXPR")

    return parser.parse_args(args or [])


def configure_logger(debug=False):
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.INFO,
        format="%(levelname)-8s %(name)-12s %(message)s",
    )


def load_settings(args):
    """Config file values, overridden by whatever was given on the command line."""
    config = mensura_config.load_or_default(args.config)
    for key in ("cv_d", "cv_h", "rho_dh"):
        if getattr(args, key, None) is not None:
            config["error_model"][key] = getattr(args, key)
    if getattr(args, "level", None) is not None:
        config["ellipsoid_level"] = args.level
    if args.format:
        config["format"] = args.format
    mensura_config.verify_config(config)
    if plugins.get_exporter(config["format"]) is None:
        raise UsageError(f"unknown format '{config['format']}' in config")
    return config


def error_model_from(config):
    try:
        return propagate.ErrorModel(**config["error_model"])
    except (TypeError, NumericalError) as e:
        raise UsageError(f"error model: {e}")


def load_dataset(args):
    if args.csv:
        return data.load_csv(
            args.csv, args.dbh_unit, args.height_unit, args.volume_unit
        )
    return data.BUILTIN_DATASETS[args.builtin or "cherry"]()


def gamma0_from(args, config):
    """--gamma0 when given, zero included, else the configured coefficient."""
    return config["da_gamma"] if args.gamma0 is None else args.gamma0


def _length(value, unit, name):
    if value is None:
        raise UsageError(f"--{name} is required")
    return Quantity(value, parse_unit_expr(unit))


def emit(result, config, out=None):
    exporter = plugins.get_exporter(config["format"])
    exporter.heading_color = config["colors"]["heading"]
    if out:
        try:
            os.makedirs(out, exist_ok=True)
        except OSError as e:
            raise MensuraError(f"cannot create {out}: {e.strerror}")
        print(exporter.export(result, out), file=sys.stderr)
    else:
        sys.stdout.write(exporter.export(result))


def cmd_analyze(args, config):
    dataset = load_dataset(args)
    paper_reference = args.paper_reference or ("none" if args.csv else dataset.name)
    expected = report.PAPER_VALUES.get(paper_reference, {}).get("records")
    if expected is not None and expected != len(dataset):
        message = (
            f"comparing {len(dataset)} trees with numbers published for {expected} "
            f"({paper_reference})"
        )
        print(warning_line(message, config["colors"]["warning"]), file=sys.stderr)
    log.debug("Analyzing %r", dataset)
    result = report.build_report(
        dataset,
        error_model=error_model_from(config),
        level=config["ellipsoid_level"],
        da_gamma=config["da_gamma"],
        honer=geometry.HonerParams(**config["honer"]),
        standard_delta=args.standard_delta,
        paper_reference=paper_reference,
    )
    emit(result, config, args.out)


def cmd_plot(args, config):
    dataset = load_dataset(args)
    size = {"width": config["plot"]["width"], "height": config["plot"]["height"]}
    if args.kind == "pairs":
        output = svg.pairs(dataset, **size)
    elif args.kind == "pi-scatter":
        output = svg.pi_scatter(dataset, args.formulation, **size)
    elif args.kind == "ellipse":
        output = svg.ellipse(dataset, config["ellipsoid_level"], **size)
    elif args.kind == "contours":
        grid = config["grid"]
        output = svg.contours(
            gamma0_from(args, config),
            (*grid["dbh_ft"], grid["steps"]),
            (*grid["height_ft"], grid["steps"]),
            error_model_from(config),
            args.standard_delta,
            **size,
        )
    elif args.kind == "species-compare":
        if not args.csv:
            raise UsageError("species-compare needs --csv with a second species")
        output = svg.species_compare([data.cherry_dataset(), dataset], **size)
    else:
        raise UsageError(f"unknown plot kind '{args.kind}'")
    for path in output.write(args.out or os.curdir):
        print(f"[Plot written to {path}]", file=sys.stderr)


def cmd_pi(args, config):
    variables = [pi.parse_variable_spec(token) for token in args.variables]
    basis = pi.basis_for(variables, label="cli")
    emit(report.pi_report(basis), config, args.out)


def cmd_volume(args, config):
    model = args.model
    result = {"name": "volume", "model": model}
    if model == "smalian":
        if not args.diameters:
            raise UsageError("--diameters is required for smalian")
        diameter_unit = parse_unit_expr(args.dbh_unit)
        length_unit = parse_unit_expr(args.height_unit)
        log_length = Quantity(args.log_length, length_unit).canonical_value
        segments = geometry.smalian_stem(
            [Quantity(d, diameter_unit).canonical_value for d in args.diameters],
            log_length,
        )
        result["logs"] = [
            report.quantity(geometry.smalian_volume(s), "ft^3") for s in segments
        ]
        volume = geometry.stem_volume(segments)
    else:
        d = _length(args.dbh, args.dbh_unit, "dbh")
        h = _length(args.height, args.height_unit, "height").canonical_value
        if model == "honer":
            params = geometry.HonerParams(**config["honer"])
            result["params"] = params.to_json()
            volume = geometry.honer_volume(convert(d, INCH).value, h, params)
        elif model == "cubic":
            if args.k is None:
                raise UsageError("--k is required for the cubic model")
            volume = geometry.meyer_cubic_volume(d.canonical_value, args.k)
        else:
            if model == "cylinder":
                solid = geometry.SolidModel.cylinder()
            elif model == "cone":
                solid = geometry.SolidModel.cone()
            else:
                if args.lam is None:
                    raise UsageError("--lambda is required for a frustum")
                solid = geometry.SolidModel.frustum(args.lam)
            result["solid"] = solid.to_json()
            result["gamma"] = report.quantity(solid.gamma, report.DIMENSIONLESS)
            volume = geometry.solid_volume(solid, d.canonical_value, h)
        result["d"] = report.quantity(d.canonical_value, "ft")
        result["h"] = report.quantity(h, "ft")
    result["volume"] = report.quantity(volume, "ft^3")
    emit(result, config, args.out)


def cmd_propagate(args, config):
    d = _length(args.dbh, args.dbh_unit, "dbh").canonical_value
    h = _length(args.height, args.height_unit, "height").canonical_value
    result = {"name": "propagate"}
    result.update(
        report.budget_report(
            gamma0_from(args, config),
            d,
            h,
            error_model_from(config),
            args.standard_delta,
        )
    )
    emit(result, config, args.out)


def evaluate_model(expression, dataset):
    """Evaluates a predictor expression once per record with asteval."""
    interpreter = asteval.Interpreter(use_numpy=False, writer=None)
    predictions = []
    for record in dataset:
        interpreter.symtable.update(
            d=record.dbh_ft, h=record.height_ft, d_in=record.dbh_in
        )
        value = interpreter.eval(expression, show_errors=False)
        if interpreter.error:
            name, message = interpreter.error[0].get_error()
            interpreter.error = []
            raise UsageError(f"model {expression!r}: {name}: {message}")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise UsageError(f"model {expression!r} gave {value!r}, not a number")
        if not math.isfinite(value):
            raise NumericalError(
                f"model {expression!r} is not finite for tree {record.id}"
            )
        predictions.append(float(value))
    return predictions


def cmd_rss(args, config):
    dataset = load_dataset(args)
    predictions = evaluate_model(args.model, dataset)
    emit(report.rss_report(dataset, args.model, predictions), config, args.out)


COMMANDS = {
    "analyze": cmd_analyze,
    "plot": cmd_plot,
    "pi": cmd_pi,
    "volume": cmd_volume,
    "propagate": cmd_propagate,
    "rss": cmd_rss,
}


def run(manual_args=None):
    if manual_args is None:
        manual_args = sys.argv[1:]

    args = parse_args(manual_args)

    configure_logger(getattr(args, "debug", False))
    if args.version:
        version_str = f"{mensura.__title__} version {mensura.__version__}"
        print(version_str)
        sys.exit(0)

    if not args.command:
        expected = ", ".join(COMMANDS)
        print(
            error_line(f"no command given, expected one of {expected}"), file=sys.stderr
        )
        sys.exit(UsageError.exit_code)

    color = "red"
    try:
        config = load_settings(args)
        color = config["colors"]["error"]
        log.debug('Using configuration "%s"', config)
        COMMANDS[args.command](args, config)
    except MensuraError as e:
        print(error_line(str(e), color), file=sys.stderr)
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        print("[Interrupted]", file=sys.stderr)
        sys.exit(1)
    sys.exit(0)
