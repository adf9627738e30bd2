"""Command-line front end.

Exit codes: 0 success, 1 failed verification check, 2 usage or driver-file
error, 3 numerical overflow.  No environment variables are consulted; the
parallelism degree comes from --threads and never changes the numbers.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .analysis import derivative_formula, run_verification
from .backward import DEFAULT_LADDER, trace_curve
from .config import RunConfig, build_meta
from .drivers import driver_fingerprint, holder_norm_estimate, load_driver
from .errors import (
    DomainError,
    InconsistencyError,
    NumericalOverflowError,
    SingularityError,
)
from .forward import hull_raster, right_hull_raster
from .io import (
    emit_svg,
    format_float,
    report_payload,
    write_json,
    write_motion_csv,
    write_raster_csv,
    write_trace_csv,
)
from .motion import motion_grid


def _floats(text, count, what):
    parts = text.split(",")
    if len(parts) != count:
        raise DomainError(f"{what} needs {count} comma-separated values")
    return tuple(float(p) for p in parts)


def _parse_grid(text):
    x0, x1, y0, y1, nx, ny = text.split(",") if text.count(",") == 5 else (None,) * 6
    if x0 is None:
        raise DomainError("--grid needs x0,x1,y0,y1,nx,ny")
    return (float(x0), float(x1), float(y0), float(y1)), int(nx), int(ny)


def _parse_ladder(text):
    values = tuple(float(p) for p in text.split(",") if p)
    if len(values) < 3:
        raise DomainError("--ladder needs at least three rungs")
    return values


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cloewner",
        description="Loewner traces, hulls, and verification for complex drivers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol_default):
        p.add_argument("--driver", required=True, help="driver JSON file")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--tol", type=float, default=tol_default)
        p.add_argument("--out", help="output file")
        p.add_argument("--svg", help="optional SVG figure")

    p = sub.add_parser("trace", help="sample the trace on [-1, 1]")
    common(p, 1e-9)
    p.add_argument("--n", type=int, default=64, help="samples per side")
    p.add_argument("--ladder", type=_parse_ladder, default=DEFAULT_LADDER)

    for name in ("hull", "right-hull"):
        p = sub.add_parser(name, help=f"rasterize the {name.replace('-', ' ')}")
        common(p, 1e-6)
        p.add_argument("--t", type=float, default=1.0)
        p.add_argument("--grid", type=_parse_grid, default=_parse_grid("-3,3,-3,3,128,128"))

    p = sub.add_parser("motion", help="trace under disk-parameter scaling")
    common(p, 1e-9)
    p.add_argument("--n", type=int, default=16, help="time samples")
    p.add_argument("--alpha-radius", type=float, default=0.2)
    p.add_argument("--alpha-count", type=int, default=8)
    p.add_argument("--ladder", type=_parse_ladder, default=DEFAULT_LADDER)

    p = sub.add_parser("derivative", help="trace derivative at one parameter")
    common(p, 1e-9)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--steps", type=int, default=4096)

    p = sub.add_parser("norm", help="Hölder-norm lower bound of the driver")
    common(p, 1e-9)
    p.add_argument("--n", type=int, default=256, help="grid resolution")

    p = sub.add_parser("verify", help="run identity and bound checks")
    common(p, 1e-6)
    p.add_argument("--suite", default="all")
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--s", type=float, default=0.25)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--window", default="-3,3,-3,3")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--n-trace", type=int, default=24)
    p.add_argument("--trace-tol", type=float, default=1e-9)
    p.add_argument("--ladder", type=_parse_ladder, default=DEFAULT_LADDER)
    return parser


def _meta(args, params):
    outputs = {k: getattr(args, k) for k in ("out", "svg") if getattr(args, k, None)}
    cfg = RunConfig(
        subcommand=args.command,
        driver_path=args.driver,
        params=params,
        outputs=outputs,
        threads=max(1, args.threads),
    )
    return build_meta(cfg, args._fingerprint)


def _cmd_trace(d, args):
    params = {"n": args.n, "tol": args.tol, "ladder": args.ladder}
    meta = _meta(args, params)
    trace = trace_curve(d, args.n, args.ladder, args.tol)
    if args.out:
        write_trace_csv(args.out, trace, meta)
    if args.svg:
        emit_svg(trace, path=args.svg, meta=meta)
    worst = float(np.max(trace.extrapolation_error))
    print(f"trace: {len(trace.points)} samples, max extrapolation error {format_float(worst)}")
    return 0


def _cmd_hull(d, args, right=False):
    window, nx, ny = args.grid
    params = {"t": args.t, "window": window, "nx": nx, "ny": ny, "tol": args.tol}
    meta = _meta(args, params)
    fn = right_hull_raster if right else hull_raster
    raster = fn(d, args.t, window, nx, ny, args.tol, threads=max(1, args.threads))
    if args.out:
        write_raster_csv(args.out, raster, meta)
    if args.svg:
        emit_svg(raster, path=args.svg, meta=meta)
    dead = int(np.sum(np.isfinite(raster.lifetimes)))
    print(f"{'right-hull' if right else 'hull'}: {dead} of {nx * ny} pixels die by t={format_float(args.t)}")
    if bool(np.any(raster.overflow)):
        raise NumericalOverflowError("raster contains overflowed pixels")
    return 0


def _cmd_motion(d, args):
    if args.alpha_count < 1 or args.alpha_radius <= 0:
        raise DomainError("alpha grid needs positive radius and count")
    ks = np.arange(args.alpha_count)
    circle = args.alpha_radius * np.exp(2j * np.pi * ks / args.alpha_count)
    alphas = np.concatenate([[0.0 + 0.0j], circle])
    ts = (np.arange(args.n + 1) / args.n) ** 2
    params = {
        "n": args.n,
        "alpha_radius": args.alpha_radius,
        "alpha_count": args.alpha_count,
        "tol": args.tol,
        "ladder": args.ladder,
    }
    meta = _meta(args, params)
    grid = motion_grid(d, alphas, ts, args.ladder, args.tol)
    if args.out:
        write_motion_csv(args.out, grid, meta)
    if args.svg:
        emit_svg(grid.values, path=args.svg, meta=meta)
    print(f"motion: {len(alphas)} disk points x {len(ts)} times")
    return 0


def _cmd_derivative(d, args):
    params = {"t": args.t, "steps": args.steps, "tol": args.tol}
    meta = _meta(args, params)
    value = derivative_formula(d, args.t, n_steps=args.steps, tol=args.tol)
    if args.out:
        write_json(args.out, {"derivative": {"re": value.real, "im": value.imag}}, meta)
    print(f"derivative: {format_float(value.real)} {format_float(value.imag)}i")
    return 0


def _cmd_norm(d, args):
    params = {"n": args.n}
    meta = _meta(args, params)
    est = holder_norm_estimate(d, args.n)
    if args.out:
        write_json(
            args.out,
            {
                "norm_lower_bound": est.norm_lower_bound,
                "pair_count": est.pair_count,
                "grid_resolution": est.grid_resolution,
            },
            meta,
        )
    print(f"norm: lower bound {format_float(est.norm_lower_bound)} on {est.pair_count} pairs")
    return 0


def _cmd_verify(d, args):
    window = _floats(args.window, 4, "--window")
    params = {
        "suite": args.suite,
        "t": args.t,
        "s": args.s,
        "a": args.a,
        "window": window,
        "resolution": args.resolution,
        "n_trace": args.n_trace,
        "tol": args.tol,
        "trace_tol": args.trace_tol,
        "ladder": args.ladder,
    }
    meta = _meta(args, params)
    report = run_verification(
        d,
        suite=args.suite,
        t=args.t,
        s=args.s,
        a=args.a,
        window=window,
        resolution=args.resolution,
        n_trace=args.n_trace,
        tol=args.tol,
        trace_tol=args.trace_tol,
        y_ladder=args.ladder,
        threads=max(1, args.threads),
    )
    if args.out:
        write_json(args.out, report_payload(report), meta)
    for e in report.entries:
        verdict = "PASS" if e["pass"] else "FAIL"
        print(
            f"{e['check']}: {verdict} metric={format_float(e['metric'])} "
            f"tolerance={format_float(e['tolerance'])}"
        )
    n_fail = sum(not e["pass"] for e in report.entries)
    print(f"verify: {len(report.entries) - n_fail}/{len(report.entries)} checks passed")
    return 0 if n_fail == 0 else 1


_DISPATCH = {
    "trace": _cmd_trace,
    "hull": lambda d, a: _cmd_hull(d, a, right=False),
    "right-hull": lambda d, a: _cmd_hull(d, a, right=True),
    "motion": _cmd_motion,
    "derivative": _cmd_derivative,
    "norm": _cmd_norm,
    "verify": _cmd_verify,
}


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        driver = load_driver(args.driver)
        args._fingerprint = driver_fingerprint(driver)
    except (OSError, DomainError) as exc:
        print(f"driver error: {exc}", file=sys.stderr)
        return 2
    try:
        return _DISPATCH[args.command](driver, args)
    except (NumericalOverflowError, SingularityError, OverflowError) as exc:
        print(f"numerical overflow: {exc}", file=sys.stderr)
        return 3
    except InconsistencyError as exc:
        print(f"consistency check failed: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
