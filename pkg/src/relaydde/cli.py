"""Command-line interface for the relay oscillator toolkit.

Subcommands:

    simulate   exact breakpoint path (delta = 0) or smoothed dense solution
    classify   return-map verdicts plus basin description
    tables     rebuild every embedded benchmark row and grade it
    scan       classify a grid over a parameter box around a center point
    smooth     smoothing convergence study at shrinking half-widths
    coexist    verify the unstable/stable coexistence pairing via the dual

Exit codes: 0 success, 1 computational failure, 2 invalid input, 3 benchmark
regression (tables found at least one non-PASS row).

Any flag can instead come from a flat 'key = value' file passed as
--config (flag names with underscores, e.g. t_end); explicit flags win.
A relative --output path is placed under $RELAYDDE_OUTDIR when that is
set; the directory is created if needed.
CSV numbers use the shortest text that parses back to the same double.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .analysis import (
    coexistence_check,
    format_table_report,
    reproduce_tables,
    scan as run_scan,
    smoothing_convergence,
)
from .exact import ConstantHistory, propagate
from .maps import NotApplicable, basin, classify
from .model import Params, Profile, RelayDDEError, SmoothingSpec, parse_config_text
from .numeric import integrate

_FLOAT_KEYS = ("a1", "a2", "p1", "p2", "h", "t_end", "delta", "step", "span")
_INT_KEYS = ("resolution", "horizon")
_STR_KEYS = ("profile", "format", "output", "deltas")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaydde",
        description="Construct, classify, and verify relay oscillator orbits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_params=True):
        if with_params:
            sp.add_argument("--a1", type=float, help="first coefficient level")
            sp.add_argument("--a2", type=float, help="second coefficient level")
            sp.add_argument("--p1", type=float, help="first stretch length")
            sp.add_argument("--p2", type=float, help="second stretch length")
        sp.add_argument("--config", help="flat key = value file supplying flag defaults")
        sp.add_argument("--format", choices=("csv", "json"), help="output payload format")
        sp.add_argument("--output", help="write the payload here instead of stdout")

    sp = sub.add_parser("simulate", help="integrate one solution and emit it")
    add_common(sp)
    sp.add_argument("--h", type=float, help="constant history value")
    sp.add_argument("--t-end", dest="t_end", type=float, help="integration horizon")
    sp.add_argument("--delta", type=float,
                    help="smoothing half-width; 0 runs the exact engine (default 0)")
    sp.add_argument("--profile", choices=tuple(p.value for p in Profile),
                    help="smoothed nonlinearity shape (default affine)")
    sp.add_argument("--step", type=float, help="integrator step for delta > 0")

    sp = sub.add_parser("classify", help="return-map verdicts for one parameter point")
    add_common(sp)

    sp = sub.add_parser("tables", help="grade the embedded benchmark rows")
    add_common(sp, with_params=False)

    sp = sub.add_parser("scan", help="classify a grid around a center point")
    add_common(sp)
    sp.add_argument("--span", type=float,
                    help="relative half-width of the box (default 0.1)")
    sp.add_argument("--resolution", type=int, help="grid points per axis (default 3)")

    sp = sub.add_parser("smooth", help="smoothing convergence study")
    add_common(sp)
    sp.add_argument("--h", type=float, help="constant history value")
    sp.add_argument("--t-end", dest="t_end", type=float, help="study horizon (default 30)")
    sp.add_argument("--deltas", help="comma-separated decreasing half-widths")

    sp = sub.add_parser("coexist", help="verify the coexistence pairing via the dual")
    add_common(sp)
    sp.add_argument("--horizon", type=int,
                    help="double periods to wait for attraction (default 30)")

    return parser


def _merge_config(args: argparse.Namespace) -> None:
    if getattr(args, "config", None) is None:
        return
    path = Path(args.config)
    if not path.is_file():
        raise ValueError(f"config file not found: {args.config}")
    cfg = parse_config_text(path.read_text())
    for key, raw in cfg.items():
        if not hasattr(args, key) or key == "config":
            continue
        if getattr(args, key) is not None:
            continue  # explicit flags win
        try:
            if key in _FLOAT_KEYS:
                setattr(args, key, float(raw))
            elif key in _INT_KEYS:
                setattr(args, key, int(raw))
            elif key in _STR_KEYS:
                setattr(args, key, raw)
        except ValueError:
            raise ValueError(f"config value for {key!r} is not valid: {raw!r}") from None
    if args.format is not None and args.format not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {args.format!r}")
    profile = getattr(args, "profile", None)
    if profile is not None and profile not in tuple(p.value for p in Profile):
        raise ValueError(f"unknown profile {profile!r}")


def _require(args: argparse.Namespace, name: str):
    value = getattr(args, name)
    if value is None:
        raise ValueError(f"--{name.replace('_', '-')} is required for this command")
    return value


def _params(args: argparse.Namespace) -> Params:
    return Params(_require(args, "a1"), _require(args, "a2"),
                  _require(args, "p1"), _require(args, "p2"))


def _resolve_output(path_str: str) -> Path:
    path = Path(path_str)
    if not path.is_absolute():
        outdir = os.environ.get("RELAYDDE_OUTDIR")
        if outdir:
            path = Path(outdir) / path
            # The env var names the artifacts root, so materialize it;
            # plain --output paths stay strict and fail on missing dirs.
            path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _emit(payload: str, args: argparse.Namespace) -> None:
    if args.output is None:
        sys.stdout.write(payload)
    else:
        _resolve_output(args.output).write_text(payload)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if cell is None else
                         (repr(cell) if isinstance(cell, float) else cell)
                         for cell in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _params_jsonable(p: Params) -> dict:
    return {"a1": p.a1, "a2": p.a2, "p1": p.p1, "p2": p.p2}


def _cmd_simulate(args: argparse.Namespace) -> int:
    params = _params(args)
    h = _require(args, "h")
    t_end = _require(args, "t_end")
    delta = 0.0 if args.delta is None else args.delta
    fmt = args.format or "csv"
    if delta == 0.0:
        path = propagate(params, ConstantHistory(h), t_end)
        payload = path.to_csv() if fmt == "csv" else _json_text(path.to_jsonable())
    else:
        profile = Profile(args.profile or "affine")
        spec = SmoothingSpec(delta=delta, profile=profile)
        sol = integrate(params, spec, h, t_end, step=args.step)
        if fmt == "csv":
            payload = sol.to_csv()
        else:
            payload = _json_text({
                "start_time": sol.start_time,
                "step": sol.step,
                "times": [float(t) for t in sol.times],
                "values": [float(v) for v in sol.values],
                "derivs": [float(d) for d in sol.derivs],
                "events": [float(e) for e in sol.events],
            })
    _emit(payload, args)
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    params = _params(args)
    verdicts = classify(params)
    try:
        basin_jsonable = basin(params).to_jsonable()
    except NotApplicable:
        basin_jsonable = None
    fmt = args.format or "json"
    if fmt == "json":
        payload = _json_text({
            "params": _params_jsonable(params),
            "verdicts": [v.to_jsonable() for v in verdicts],
            "basin": basin_jsonable,
        })
    else:
        rows = []
        for v in verdicts:
            if isinstance(v.h_star, tuple):
                h_low, h_high = v.h_star
            else:
                h_low, h_high = v.h_star, None
            rows.append([v.kind, h_low, h_high, v.period, v.m, v.b, v.k, v.d,
                         v.validated, v.boundary, v.reason])
        payload = _csv_text(
            ["kind", "h_star_low", "h_star_high", "period", "m", "b", "k", "d",
             "validated", "boundary", "reason"], rows)
    _emit(payload, args)
    return 0


def _cmd_tables(args: argparse.Namespace) -> int:
    results = reproduce_tables()
    sys.stdout.write(format_table_report(results))
    if args.output is not None:
        fmt = args.format or "json"
        if fmt == "json":
            payload = _json_text([
                {"table": r.row.table_id, "index": r.row.index,
                 **_params_jsonable(r.row.params),
                 "h_expected": r.row.h_star_expected,
                 "h_computed": r.computed_h,
                 "period": r.computed_period,
                 "status": r.status}
                for r in results
            ])
        else:
            payload = _csv_text(
                ["table", "index", "a1", "a2", "p1", "p2", "h_expected",
                 "h_computed", "period", "status"],
                [[r.row.table_id, r.row.index, r.row.params.a1, r.row.params.a2,
                  r.row.params.p1, r.row.params.p2, r.row.h_star_expected,
                  r.computed_h, r.computed_period, r.status]
                 for r in results])
        _emit(payload, args)
    return 0 if all(r.status == "PASS" for r in results) else 3


def _cmd_scan(args: argparse.Namespace) -> int:
    centers = (_require(args, "a1"), _require(args, "a2"),
               _require(args, "p1"), _require(args, "p2"))
    span = 0.1 if args.span is None else args.span
    if not 0.0 < span < 1.0:
        raise ValueError(f"--span must lie strictly between 0 and 1, got {span}")
    resolution = 3 if args.resolution is None else args.resolution
    ranges = tuple((c * (1.0 - span), c * (1.0 + span)) for c in centers)
    report = run_scan(*ranges, resolution)
    fmt = args.format or "json"
    if fmt == "json":
        jsonable = report.to_jsonable()
        jsonable["kind_counts"] = report.kind_counts()
        payload = _json_text(jsonable)
    else:
        payload = _csv_text(
            ["a1", "a2", "p1", "p2", "kinds", "boundary"],
            [[c.a1, c.a2, c.p1, c.p2, ";".join(c.kinds), c.boundary]
             for c in report.cells])
    _emit(payload, args)
    if args.output is not None:
        counts = ", ".join(f"{k}={n}" for k, n in sorted(report.kind_counts().items()))
        print(f"{len(report.cells)} cells, overlap_free={report.overlap_free}, {counts}")
    return 0


def _cmd_smooth(args: argparse.Namespace) -> int:
    params = _params(args)
    h = _require(args, "h")
    t_end = 30.0 if args.t_end is None else args.t_end
    raw = args.deltas or "0.05,0.025,0.0125"
    try:
        deltas = tuple(float(tok) for tok in raw.split(","))
    except ValueError:
        raise ValueError(f"--deltas must be comma-separated numbers, got {raw!r}") from None
    table = smoothing_convergence(params, h, deltas, t_end)
    fmt = args.format or "json"
    if fmt == "json":
        payload = _json_text(table.to_jsonable())
    else:
        payload = _csv_text(
            ["delta", "max_dev_overall", "residual"],
            [[r.delta, r.max_dev_overall, r.residual] for r in table.rows])
    _emit(payload, args)
    if args.output is not None:
        print(f"{len(table.rows)} half-widths, fitted_c={table.fitted_c!r}")
    return 0


def _cmd_coexist(args: argparse.Namespace) -> int:
    params = _params(args)
    horizon = 30 if args.horizon is None else args.horizon
    if horizon < 3:
        raise ValueError(f"--horizon must be at least 3, got {horizon}")
    report = coexistence_check(params, horizon_periods=horizon)
    fmt = args.format or "json"
    if fmt == "json":
        payload = _json_text(report.to_jsonable())
    else:
        payload = _csv_text(
            ["h_unstable", "h_stable_low", "h_stable_high", "shift_sup_distance",
             "convergence_plus", "convergence_minus", "residual_plus",
             "residual_minus", "tail_plus", "tail_minus"],
            [[report.h_unstable, report.h_stable[0], report.h_stable[1],
              report.shift_sup_distance,
              report.convergence_periods[0], report.convergence_periods[1],
              report.return_map_residuals[0], report.return_map_residuals[1],
              report.tail_distances[0], report.tail_distances[1]]])
    _emit(payload, args)
    if args.output is not None:
        print(f"coexistence verified: h_unstable={report.h_unstable!r}, "
              f"h_stable=({report.h_stable[0]!r}, {report.h_stable[1]!r})")
    return 0


_DISPATCH = {
    "simulate": _cmd_simulate,
    "classify": _cmd_classify,
    "tables": _cmd_tables,
    "scan": _cmd_scan,
    "smooth": _cmd_smooth,
    "coexist": _cmd_coexist,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        _merge_config(args)
        return _DISPATCH[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RelayDDEError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
