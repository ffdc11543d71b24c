"""Command-line surface: split | sweep | table1 | profile.

All I/O uses reduced units (lengths in x0, energies in E_u, mean-field
potential in kT).  Output formats are CSV (comma-separated, metadata in
``#``-prefixed lines, LF line endings) and JSON (one object with "meta"
and "rows").  Numbers are serialized with 12 significant digits.

Exit codes: 0 success, 1 usage or parameter error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import re
import sys

import numpy as np

from . import __version__, exact, experiments, localization, models, numerics, wkb

UNIT_NOTE = """\
Reduced units: lengths in x0 (half the well separation), energies in
E_u = hbar^2 / (2 m x0^2), mean-field potential U in kT.  For scale: a
hydrogen atom tunneling between wells 1 Angstrom apart (x0 = 0.5 A) has
E_u ~ 0.8 kJ/mol ~ 67 cm^-1; splittings in E_u units translate
accordingly.  The diffusion picture fixes m = hbar / (2 D).
"""

SWEEP_COLUMNS = (
    "swept_value", "x0", "sigma", "alpha", "delta_u", "delta_v",
    "width", "overlap", "splitting_exact", "splitting_localization",
    "splitting_wkb", "relerr_localization", "relerr_wkb", "failures",
)

_FAMILY_TAGS = {
    "simple-du": "simple_gaussian_dU",
    "fixed-dv": "extended_fixed_dV",
    "quartic-du": "quartic_dU",
}


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; the contract wants 1.

    Also widens the negative-number heuristic so range values with a
    leading minus (``--grid -1.5:1.5:601``) parse as arguments.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(
            r"^-\d+$|^-\d*\.\d+$|^-\d*\.?\d+:")

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_range(text: str) -> tuple[float, float, int]:
    """start:stop:n with n an integer >= 2."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected start:stop:n, got {text!r}")
    try:
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None
    if n < 2:
        raise argparse.ArgumentTypeError(f"need n >= 2 points, got {n}")
    return start, stop, n


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _round12(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    return value


def _sweep_row_record(row: experiments.SweepRow) -> dict:
    rec = {
        "swept_value": row.swept_value, "x0": row.x0, "sigma": row.sigma,
        "alpha": row.alpha, "delta_u": row.delta_u, "delta_v": row.delta_v,
        "width": row.width, "overlap": row.overlap,
        "splitting_exact": row.splittings.get("exact"),
        "splitting_localization": row.splittings.get("localization"),
        "splitting_wkb": row.splittings.get("wkb"),
        "relerr_localization": row.rel_errors.get("localization"),
        "relerr_wkb": row.rel_errors.get("wkb"),
        "failures": "|".join(f"{k}={v}" for k, v in row.failures.items()),
    }
    return rec


def _write_csv(stream, columns, records, meta) -> None:
    for key in sorted(meta):
        stream.write(f"# {key} = {_fmt(meta[key])}\n")
    stream.write(",".join(columns) + "\n")
    for rec in records:
        stream.write(",".join(_fmt(rec[c]) for c in columns) + "\n")


def _emit(args, columns, records, meta) -> None:
    """Serialize records to args.output (or stdout) in args.format."""
    if args.format == "csv":
        buf = io.StringIO()
        _write_csv(buf, columns, records, meta)
        text = buf.getvalue()
    else:
        rows = [_round12({c: r[c] for c in columns}) for r in records]
        text = json.dumps({"meta": _round12(meta), "rows": rows},
                          indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base_meta(command: str, **extra) -> dict:
    meta = {"package": "dwsplit", "version": __version__, "command": command}
    meta.update(extra)
    return meta


def cmd_split(args) -> int:
    if (args.dv is None) != (args.width is None):
        raise _usage_error("--dv and --width must be given together")
    if args.dv is not None:
        if args.sigma is not None:
            raise _usage_error("give either --sigma or --dv/--width")
        model = models.solve_parameters(args.dv, args.width, x0=args.x0,
                                        allow_out_of_range=args.allow_out_of_range)
    else:
        if args.sigma is None:
            raise _usage_error("need --sigma (with --alpha) or --dv/--width")
        model = models.TwoGaussianModel(
            sigma=args.sigma, x0=args.x0, alpha=args.alpha,
            allow_out_of_range=args.allow_out_of_range)

    heights = models.barrier_heights(model)
    try:
        width = models.barrier_width(model)
    except ValueError:
        width = None
    view = models.two_gaussian_meanfield(model)
    dv_func = lambda x: models.quantum_potential_closed(model, x)
    curv_min = models.curvature_at_minima(model)

    methods = args.methods
    splittings: dict[str, float] = {}
    failures: dict[str, str] = {}
    diagnostics: dict[str, object] = {}
    if "exact" in methods:
        try:
            res = exact.exact_splitting(dv_func, model.x0, curv_min)
            splittings["exact"] = res.splitting
            diagnostics["n_basis"] = res.n_basis_used
            diagnostics["ground_level"] = res.e0
            if not res.converged:
                failures["exact"] = "basis not converged"
        except (ValueError, ArithmeticError, numerics.NumericsError) as err:
            failures["exact"] = f"{type(err).__name__}: {err}"
    if "localization" in methods:
        try:
            res = localization.splitting_localization(view)
            splittings["localization"] = res.splitting
            diagnostics["i_integral"] = res.i_value
            diagnostics["g_norm"] = res.g_norm
        except (ValueError, ArithmeticError, numerics.NumericsError) as err:
            failures["localization"] = f"{type(err).__name__}: {err}"
    if "wkb" in methods:
        try:
            res = wkb.wkb_splitting(dv_func, curv_min, model.x0)
            splittings["wkb"] = res.splitting
            diagnostics["turning_points"] = list(res.turning_points)
            diagnostics["action"] = res.action
            diagnostics["well_frequency"] = res.well_frequency
        except (ValueError, ArithmeticError, numerics.NumericsError) as err:
            failures["wkb"] = f"{type(err).__name__}: {err}"

    record = {
        "alpha": model.alpha, "sigma": model.sigma, "x0": model.x0,
        "delta_u": heights.delta_u, "delta_v": heights.delta_v,
        "width": width,
        "overlap": models.superposition_coefficient(model),
        "splittings": splittings, "failures": failures,
        "diagnostics": diagnostics,
        "validity_warnings": list(model.validity_warnings),
    }
    meta = _base_meta("split")
    if args.format == "csv":
        columns = ("alpha", "sigma", "x0", "delta_u", "delta_v", "width",
                   "overlap", "splitting_exact", "splitting_localization",
                   "splitting_wkb", "failures")
        flat = dict(record)
        for m in ("exact", "localization", "wkb"):
            flat[f"splitting_{m}"] = splittings.get(m)
        flat["failures"] = "|".join(f"{k}={v}" for k, v in failures.items())
        _emit(args, columns, [flat], meta)
    else:
        text = json.dumps({"meta": _round12(meta), **_round12(record)},
                          indent=2, sort_keys=True) + "\n"
        if args.output:
            with open(args.output, "w", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    if splittings:
        return 0
    print("all requested methods failed: "
          + "; ".join(f"{k}: {v}" for k, v in failures.items()),
          file=sys.stderr)
    return 2


def cmd_sweep(args) -> int:
    if args.family is None:
        raise _usage_error("--family is required (simple-du, fixed-dv, "
                           "quartic-du), via flag or config file")
    family = _FAMILY_TAGS[args.family]
    fixed = {"x0": args.x0}
    if family == "extended_fixed_dV":
        if args.dv is None:
            raise _usage_error("--family fixed-dv requires --dv")
        if args.alpha_range is None:
            raise _usage_error("--family fixed-dv requires --alpha START:STOP:N")
        start, stop, n = args.alpha_range
        fixed["delta_v"] = args.dv
    else:
        if args.du_range is None:
            raise _usage_error(f"--family {args.family} requires --du START:STOP:N")
        start, stop, n = args.du_range
    spec = experiments.SweepSpec(
        family=family, start=start, stop=stop, n_points=n, fixed=fixed,
        methods=args.methods, allow_out_of_range=args.allow_out_of_range)
    rows = experiments.run_sweep(spec)
    meta = _base_meta(
        "sweep", family=family, start=start, stop=stop, n_points=n,
        methods=",".join(spec.methods),
        **{f"fixed.{k}": v for k, v in sorted(fixed.items())})
    _emit(args, SWEEP_COLUMNS, [_sweep_row_record(r) for r in rows], meta)
    return 0


def cmd_table1(args) -> int:
    if args.output is None and not args.serialize:
        print(experiments.table1(args.dv))
        return 0
    rows = experiments.table1_rows(args.dv)
    columns = ("alpha", "sigma_over_x0", "delta_u", "curvature_origin",
               "curvature_minima", "width_over_x0")
    records = [dataclasses.asdict(r) for r in rows]
    meta = _base_meta("table1", delta_v=args.dv)
    _emit(args, columns, records, meta)
    return 0


def cmd_profile(args) -> int:
    if args.grid is None:
        raise _usage_error("--grid START:STOP:N is required, via flag or "
                           "config file")
    start, stop, n = args.grid
    if not start < stop:
        raise _usage_error("grid start must be below stop")
    grid = np.linspace(start, stop, n)

    if args.family is not None:
        if args.family == "quartic-family":
            if not args.du_list:
                raise _usage_error("--family quartic-family requires --du-list")
            profiles = experiments.quartic_family_profiles(args.du_list, grid)
        elif args.family == "shape":
            if not args.sigma_list:
                raise _usage_error("--family shape requires --sigma-list")
            profiles = experiments.shape_family_profiles(
                args.sigma_list, grid, alpha=args.alpha,
                allow_out_of_range=args.allow_out_of_range)
        else:
            if args.dv is None or not args.alpha_list:
                raise _usage_error(
                    "--family fixed-dv requires --dv and --alpha-list")
            profiles = experiments.fixed_dv_family_profiles(
                args.dv, args.alpha_list, grid)
    elif args.quartic:
        if args.du is None:
            raise _usage_error("--quartic requires --du")
        profiles = experiments.emit_profiles(
            models.QuarticMeanFieldModel(du=args.du, x0=args.x0), grid)
    else:
        if args.sigma is None:
            raise _usage_error(
                "need --sigma (two-Gaussian), --quartic --du, or --family")
        model = models.TwoGaussianModel(
            sigma=args.sigma, x0=args.x0, alpha=args.alpha,
            allow_out_of_range=args.allow_out_of_range)
        profiles = experiments.emit_profiles(model, grid)

    meta = _base_meta("profile", grid=f"{start:g}:{stop:g}:{n}")
    for i, p in enumerate(profiles):
        meta[f"column.{i + 1}"] = f"{p.kind} ({p.label})"
    columns = ["x"] + [f"{p.kind}[{i + 1}]" for i, p in enumerate(profiles)]
    records = []
    for j, x in enumerate(grid):
        rec = {"x": float(x)}
        for i, p in enumerate(profiles):
            rec[f"{p.kind}[{i + 1}]"] = float(p.values[j])
        records.append(rec)
    _emit(args, columns, records, meta)
    return 0


def _usage_error(message: str) -> SystemExit:
    print(f"dwsplit: error: {message}", file=sys.stderr)
    return SystemExit(1)


def _add_common_output(sub, default_format: str) -> None:
    sub.add_argument("-o", "--output", default=None,
                     help="output file (stdout when omitted)")
    sub.add_argument("--format", choices=("csv", "json"),
                     default=default_format, help="serialization format")
    sub.add_argument("--config", default=None,
                     help="plain-text defaults file with key = value lines; "
                          "explicit flags win")


def build_parser():
    parser = _Parser(
        prog="dwsplit",
        description="Tunneling splitting of one-dimensional symmetric "
                    "double wells via exact diagonalization, a "
                    "localization-function bound, and a WKB baseline.")
    parser.add_argument("--unit-doc", action="store_true",
                        help="print the reduced-unit conversion note and exit")
    subs = parser.add_subparsers(dest="command", parser_class=_Parser)
    registry = {}

    split = subs.add_parser("split", help="splitting of one model")
    split.add_argument("--alpha", type=float, default=1.0)
    split.add_argument("--sigma", type=float, default=None,
                       help="Gaussian width in x0 units")
    split.add_argument("--x0", type=float, default=1.0)
    split.add_argument("--dv", type=float, default=None,
                       help="target quantum barrier height (with --width)")
    split.add_argument("--width", type=float, default=None,
                       help="target barrier width in x0 units (with --dv)")
    split.add_argument("--methods", type=lambda s: tuple(s.split(",")),
                       default=experiments.METHODS,
                       help="comma list from exact,localization,wkb")
    split.add_argument("--allow-out-of-range", action="store_true")
    _add_common_output(split, "json")
    split.set_defaults(func=cmd_split)
    registry["split"] = split

    sweep = subs.add_parser("sweep", help="parameter sweep to CSV/JSON")
    # not argparse-required so a config file may supply it; checked in cmd_sweep
    sweep.add_argument("--family", choices=tuple(_FAMILY_TAGS), default=None)
    sweep.add_argument("--du", dest="du_range", type=_parse_range,
                       default=None, metavar="START:STOP:N",
                       help="dU range for simple-du / quartic-du")
    sweep.add_argument("--alpha", dest="alpha_range", type=_parse_range,
                       default=None, metavar="START:STOP:N",
                       help="alpha range for fixed-dv")
    sweep.add_argument("--dv", type=float, default=None,
                       help="fixed quantum barrier height for fixed-dv")
    sweep.add_argument("--x0", type=float, default=1.0)
    sweep.add_argument("--methods", type=lambda s: tuple(s.split(",")),
                       default=experiments.METHODS,
                       help="comma list from exact,localization,wkb")
    sweep.add_argument("--allow-out-of-range", action="store_true")
    _add_common_output(sweep, "csv")
    sweep.set_defaults(func=cmd_sweep)
    registry["sweep"] = sweep

    table = subs.add_parser("table1", help="fixed-dV parameter table")
    table.add_argument("--dv", type=float, default=experiments.TABLE1_DELTA_V)
    table.add_argument("--serialize", action="store_true",
                       help="emit CSV/JSON instead of the formatted table")
    _add_common_output(table, "csv")
    table.set_defaults(func=cmd_table1)
    registry["table1"] = table

    profile = subs.add_parser("profile", help="potential profiles on a grid")
    profile.add_argument("--grid", type=_parse_range, default=None,
                         metavar="START:STOP:N")
    profile.add_argument("--quartic", action="store_true",
                         help="quartic mean-field model (needs --du)")
    profile.add_argument("--du", type=float, default=None)
    profile.add_argument("--alpha", type=float, default=1.0)
    profile.add_argument("--sigma", type=float, default=None)
    profile.add_argument("--x0", type=float, default=1.0)
    profile.add_argument("--family",
                         choices=("quartic-family", "shape", "fixed-dv"),
                         default=None)
    profile.add_argument("--du-list", type=_parse_float_list, default=())
    profile.add_argument("--sigma-list", type=_parse_float_list, default=())
    profile.add_argument("--alpha-list", type=_parse_float_list, default=())
    profile.add_argument("--dv", type=float, default=None)
    profile.add_argument("--allow-out-of-range", action="store_true")
    _add_common_output(profile, "csv")
    profile.set_defaults(func=cmd_profile)
    registry["profile"] = profile

    return parser, registry


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(
                        f"{path}:{lineno}: expected key = value, got {raw!r}")
                key, _, val = line.partition("=")
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as err:
        raise ValueError(f"cannot read config {path}: {err}") from None
    return values


def _apply_config(parser, sub, argv: list[str], args):
    """Re-parse with config values as subcommand defaults; flags win."""
    raw = _load_config(args.config)
    # accept both flag spellings (du, alpha) and argparse dests (du_range)
    actions = {}
    for action in sub._actions:
        actions[action.dest] = action
        for opt in action.option_strings:
            actions[opt.lstrip("-").replace("-", "_")] = action
    defaults = {}
    for key, val in raw.items():
        if key not in actions:
            raise _usage_error(f"unknown config key {key!r}")
        action = actions[key]
        if isinstance(action, (argparse._StoreTrueAction,
                               argparse._StoreFalseAction)):
            defaults[action.dest] = val.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            defaults[action.dest] = action.type(val)
        else:
            defaults[action.dest] = val
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, registry = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.unit_doc:
            print(UNIT_NOTE, end="")
            return 0
        if args.command is None:
            parser.error("a subcommand is required (split, sweep, table1, "
                         "profile) unless --unit-doc is given")
        if getattr(args, "config", None):
            args = _apply_config(parser, registry[args.command], argv, args)
        return args.func(args)
    except SystemExit as err:
        code = err.code if isinstance(err.code, int) else 1
        return code
    except (argparse.ArgumentTypeError, ValueError) as err:
        print(f"dwsplit: error: {err}", file=sys.stderr)
        return 1
    except (ArithmeticError, numerics.NumericsError) as err:
        print(f"dwsplit: numerical failure: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"dwsplit: i/o failure: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
