"""Command-line front end.

Subcommands: estimate, curve, mpp, sweep, fn-plot, serve.  Panels come
either from a bundled name (--panel) or a JSON datasheet file
(--datasheet).  Environment flags use surface units (W/m2, degC) and
are converted at this boundary; reports are key=value lines at full
precision and CSV output is byte-identical to the library's exporter.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .datasheet import (
    bundled_panel,
    bundled_panel_names,
    export_curve_csv,
    format_decimal,
    load_datasheet,
)
from .errors import PvSimError
from .estimation import (
    DEFAULT_CONTEXT,
    PanelDatasheet,
    estimate_parameters,
    sample_ideality_residual,
)
from .simulation import EnvConditions, generate_iv_curve, track_mpp


def _sample_count(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("must be at least 2")
    return value


def _add_panel_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--panel", metavar="NAME",
                       help="bundled panel name (%s)" % ", ".join(bundled_panel_names()))
    group.add_argument("--datasheet", metavar="PATH",
                       help="path to a JSON datasheet file")


def _add_environment(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--irradiance", type=float, default=1000.0,
                        metavar="W_M2", help="irradiance in W/m2 (default 1000)")
    parser.add_argument("--temperature", type=float, default=25.0,
                        metavar="DEG_C", help="cell temperature in degC (default 25)")


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", metavar="PATH",
                        help="write output to PATH instead of stdout")


def _load_panel(args: argparse.Namespace) -> PanelDatasheet:
    if args.datasheet is not None:
        return load_datasheet(args.datasheet)
    return bundled_panel(args.panel)


def _environment(args: argparse.Namespace) -> EnvConditions:
    return EnvConditions.from_w_m2_and_celsius(
        args.irradiance, args.temperature, DEFAULT_CONTEXT)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _run_estimate(args: argparse.Namespace) -> int:
    params = estimate_parameters(_load_panel(args), DEFAULT_CONTEXT)
    report = (
        f"n={format_decimal(params.n)}\n"
        f"rs_ohm={format_decimal(params.rs)}\n"
        f"i0_a={format_decimal(params.i0_stc)}\n"
        f"iterations={params.iterations}\n"
        f"residual={format_decimal(params.residual)}\n"
    )
    _emit(report, args.out)
    return 0


def _run_curve(args: argparse.Namespace) -> int:
    datasheet = _load_panel(args)
    params = estimate_parameters(datasheet, DEFAULT_CONTEXT)
    curve = generate_iv_curve(datasheet, params, _environment(args),
                              DEFAULT_CONTEXT, points=args.points)
    _emit(export_curve_csv(curve), args.out)
    return 0


def _run_mpp(args: argparse.Namespace) -> int:
    datasheet = _load_panel(args)
    params = estimate_parameters(datasheet, DEFAULT_CONTEXT)
    curve = generate_iv_curve(datasheet, params, _environment(args),
                              DEFAULT_CONTEXT, points=args.points)
    mpp = track_mpp(curve)
    report = (
        f"v_mp={format_decimal(mpp.v_mp)}\n"
        f"i_mp={format_decimal(mpp.i_mp)}\n"
        f"p_mp={format_decimal(mpp.p_mp)}\n"
    )
    _emit(report, args.out)
    return 0


def _parse_value_list(text: str, flag: str) -> list[float]:
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise PvSimError(f"{flag} needs at least one value")
    try:
        return [float(item) for item in items]
    except ValueError as exc:
        raise PvSimError(f"{flag} has a non-numeric value: {exc}") from exc


def _sweep_path(out: str, suffix: str) -> Path:
    path = Path(out)
    extension = path.suffix if path.suffix else ".csv"
    stem = path.name[:-len(path.suffix)] if path.suffix else path.name
    return path.with_name(f"{stem}_{suffix}{extension}")


def _run_sweep(args: argparse.Namespace) -> int:
    datasheet = _load_panel(args)
    params = estimate_parameters(datasheet, DEFAULT_CONTEXT)
    if args.temperatures is not None:
        values = _parse_value_list(args.temperatures, "--temperatures")
        axis = "t"
    else:
        values = _parse_value_list(args.irradiances, "--irradiances")
        axis = "g"
    for value in values:
        if axis == "t":
            env = EnvConditions.from_w_m2_and_celsius(
                args.irradiance, value, DEFAULT_CONTEXT)
        else:
            env = EnvConditions.from_w_m2_and_celsius(
                value, args.temperature, DEFAULT_CONTEXT)
        curve = generate_iv_curve(datasheet, params, env,
                                  DEFAULT_CONTEXT, points=args.points)
        path = _sweep_path(args.out, f"{axis}{format_decimal(value)}")
        path.write_text(export_curve_csv(curve), encoding="utf-8")
        print(path)
    return 0


def _run_fn_plot(args: argparse.Namespace) -> int:
    if not 0.0 < args.n_min < args.n_max:
        print("error ValueError: need 0 < --n-min < --n-max "
              f"(got {args.n_min}, {args.n_max})", file=sys.stderr)
        return 2
    datasheet = _load_panel(args)
    samples = sample_ideality_residual(
        datasheet, args.n_min, args.n_max, args.count, DEFAULT_CONTEXT)
    lines = ["n,f_n"]
    lines.extend(f"{format_decimal(s.n)},{format_decimal(s.value)}" for s in samples)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _run_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(port=args.port, bind=args.bind, ui_dir=args.ui)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvsim",
        description="Single-diode solar panel simulator: estimate parameters "
                    "from datasheet values, generate I-V/P-V curves, track MPP.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_est = sub.add_parser("estimate",
                           help="estimate (n, Rs, I0) from a datasheet")
    _add_panel_source(p_est)
    _add_output(p_est)
    p_est.set_defaults(handler=_run_estimate)

    p_curve = sub.add_parser("curve", help="emit an I-V/P-V curve as CSV")
    _add_panel_source(p_curve)
    _add_environment(p_curve)
    p_curve.add_argument("--points", type=_sample_count, default=2000,
                         help="current sample count (default 2000)")
    _add_output(p_curve)
    p_curve.set_defaults(handler=_run_curve)

    p_mpp = sub.add_parser("mpp", help="report the maximum power point")
    _add_panel_source(p_mpp)
    _add_environment(p_mpp)
    p_mpp.add_argument("--points", type=_sample_count, default=2000,
                       help="current sample count (default 2000)")
    _add_output(p_mpp)
    p_mpp.set_defaults(handler=_run_mpp)

    p_sweep = sub.add_parser(
        "sweep", help="emit one curve CSV per swept temperature or irradiance")
    _add_panel_source(p_sweep)
    _add_environment(p_sweep)
    axis = p_sweep.add_mutually_exclusive_group(required=True)
    axis.add_argument("--temperatures", metavar="T1,T2,...",
                      help="comma-separated cell temperatures in degC")
    axis.add_argument("--irradiances", metavar="G1,G2,...",
                      help="comma-separated irradiances in W/m2")
    p_sweep.add_argument("--points", type=_sample_count, default=2000,
                         help="current sample count (default 2000)")
    p_sweep.add_argument("--out", metavar="PATH", required=True,
                         help="output path stem; the swept value is suffixed")
    p_sweep.set_defaults(handler=_run_sweep)

    p_fn = sub.add_parser(
        "fn-plot", help="tabulate the ideality-factor residual f(n) as CSV")
    _add_panel_source(p_fn)
    p_fn.add_argument("--n-min", type=float, default=0.5)
    p_fn.add_argument("--n-max", type=float, default=10.0)
    p_fn.add_argument("--count", type=_sample_count, default=200)
    _add_output(p_fn)
    p_fn.set_defaults(handler=_run_fn_plot)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--bind", default="127.0.0.1")
    p_serve.add_argument("--ui", metavar="DIR", default=None,
                         help="serve a static UI bundle from DIR at /")
    p_serve.set_defaults(handler=_run_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (PvSimError, OSError) as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
