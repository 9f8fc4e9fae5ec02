"""Command-line interface: subcommand dispatch, CSV output, run manifests.

Exit codes are a stable contract: 0 success, 2 configuration error,
3 integration failure, 4 bandwidth range failure, 5 partial sweep failure.
Data files are deterministic for a given config and version (17
significant digits, LF line endings, no timestamps); each CSV gets a
sidecar `<stem>.manifest.json` carrying the resolved parameters and the
invariant check results.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import __version__, metrics, wkb
from .errors import BandwidthRangeError, ConfigError, IntegrationFailureError, StiffnessError
from .params import (
    TWO_PI,
    RATE_MODES,
    SimParams,
    TimeGrid,
    baseline_config,
    ghz_to_rad_ns,
    load_config,
    seconds_rate_to_internal,
    to_external,
    validate,
)
from .propagation import backend

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3
EXIT_BANDWIDTH = 4
EXIT_PARTIAL_SWEEP = 5

FIGURE_IDS = ("2", "3", "4a", "4b", "5")
FIG4A_T1_NS = (10.0, 20.0, 50.0, 500.0)
FIG4B_X = (2.0, 1.9, 1.8, 1.7)
FIG5_N = (1, 2, 3)
FIG3_X = (2.0, 1.9, 1.8)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")
    os.replace(tmp, path)


def _write_manifest(csv_path: Path, p: SimParams | None, command: str,
                    started: float, checks: dict[str, Any] | None = None,
                    extra: dict[str, Any] | None = None) -> None:
    manifest: dict[str, Any] = {
        "tool": "jjphotond",
        "version": __version__,
        "command": command,
        "backend": backend(),
        "data_file": csv_path.name,
        "wall_clock_s": round(time.monotonic() - started, 6),
    }
    if p is not None:
        manifest["params_internal"] = {
            "delta_rad_ns": p.delta, "omega_rad_ns": p.omega,
            "kappa_per_ns": p.kappa, "gamma_per_ns": p.gamma,
            "gamma_g_per_ns": p.gamma_g, "gamma_e_per_ns": p.gamma_e,
            "omega_eg_rad_ns": p.omega_eg,
            "n_init": p.n_init, "n_max": p.n_max,
        }
        manifest["params_external"] = to_external(p)
        manifest["rate_mode"] = p.rate_mode
        manifest["rate_note"] = p.rate_note
        manifest["frame"] = p.frame
        manifest["grid"] = asdict(p.grid)
        manifest["tolerances"] = {"rel": p.tol.rel, "abs": p.tol.abs}
    if checks:
        manifest["checks"] = checks
    if extra:
        manifest.update(extra)
    out = csv_path.with_name(csv_path.stem + ".manifest.json")
    with open(out, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def _checks_from_meta(meta: dict[str, Any]) -> dict[str, Any]:
    keys = ("n_accepted", "n_rejected", "max_positivity_violation",
            "max_hermiticity_drift", "max_trace_uptick")
    return {k: meta[k] for k in keys if k in meta}


def _merge_checks(all_checks: list[dict[str, Any]]) -> dict[str, Any]:
    if not all_checks:
        return {}
    merged: dict[str, Any] = {}
    for key in ("n_accepted", "n_rejected"):
        merged[key] = sum(c.get(key, 0) for c in all_checks)
    for key in ("max_positivity_violation", "max_hermiticity_drift",
                "max_trace_uptick"):
        merged[key] = max(c.get(key, 0.0) for c in all_checks)
    return merged


def _load_params(args: argparse.Namespace) -> SimParams:
    raw = dict(load_config(args.config)) if args.config else baseline_config()
    if getattr(args, "mode", None):
        if "bias_x" not in raw and not {"i_over_i0", "i0_ua", "c_pf"} <= set(raw):
            raise ConfigError("--mode requires a bias-based tunneling spec in the config")
        raw["rate_mode"] = args.mode
    if getattr(args, "frame", None):
        raw["frame"] = args.frame
    if getattr(args, "stride_ns", None) is not None:
        raw["stride_ns"] = args.stride_ns
    if getattr(args, "t_end_ns", None) is not None:
        raw["t_end_ns"] = args.t_end_ns
    return validate(raw)


def _workers(args: argparse.Namespace) -> int:
    if getattr(args, "workers", None) is not None:
        n = args.workers
    else:
        env = os.environ.get("JJPHOTOND_WORKERS")
        if env is not None:
            try:
                n = int(env)
            except ValueError:
                raise ConfigError(f"JJPHOTOND_WORKERS must be an integer, got {env!r}")
        else:
            n = min(4, os.cpu_count() or 1)
    if n < 1:
        raise ConfigError(f"worker count must be >= 1, got {n}")
    return n


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(getattr(args, "out", None) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_rates(args: argparse.Namespace) -> int:
    started = time.monotonic()
    rows: list[tuple[str, float, str, float, str]] = []
    if args.config:
        raw = dict(load_config(args.config))
    else:
        raw = {}
        if args.bias_x is not None:
            raw["bias_x"] = args.bias_x
            raw["rate_mode"] = args.mode or "anchored"
        if args.i_over_i0 is not None or args.i0_ua is not None or args.c_pf is not None:
            for key, val in (("i_over_i0", args.i_over_i0),
                             ("i0_ua", args.i0_ua), ("c_pf", args.c_pf)):
                if val is not None:
                    raw[key] = val

    note = ""
    if {"i_over_i0", "i0_ua", "c_pf"} <= set(raw):
        bias = wkb.JunctionBias(i_ratio=float(raw["i_over_i0"]),
                                i0=float(raw["i0_ua"]) * 1e-6,
                                c=float(raw["c_pf"]) * 1e-12)
        derived = wkb.derive(bias)
        mode = raw.get("rate_mode", args.mode or "raw")
        if mode == "anchored":
            gg, ge = wkb.rates_anchored(derived.x)
            note = f"anchored at x={derived.x:.6g}"
        else:
            gg, ge = derived.gamma_g, derived.gamma_e
            note = f"raw, omega_p/2pi={derived.omega_p / TWO_PI / 1e9:.6g} GHz"
        rows.append(("delta_u", derived.delta_u, "J", derived.delta_u, "J"))
        rows.append(("omega_p", derived.omega_p, "rad/s",
                     derived.omega_p * 1e-9, "rad/ns"))
        rows.append(("omega_eg", derived.omega_eg, "rad/s",
                     derived.omega_eg * 1e-9, "rad/ns"))
        rows.append(("x", derived.x, "1", derived.x, "1"))
    elif "bias_x" in raw:
        x = float(raw["bias_x"])
        mode = raw.get("rate_mode", args.mode or "anchored")
        if mode not in RATE_MODES:
            raise ConfigError(f"rate mode must be one of {RATE_MODES}, got {mode!r}")
        if mode == "anchored":
            gg, ge = wkb.rates_anchored(x)
            note = f"anchored at x={x:g}"
        else:
            omega_p_ghz = args.omega_p_ghz or raw.get("omega_eg_ghz")
            if omega_p_ghz is None:
                raise ConfigError(
                    "raw mode needs an attempt frequency: pass --omega-p-ghz "
                    "or provide omega_eg_ghz"
                )
            omega_p = ghz_to_rad_ns(float(omega_p_ghz)) * 1e9
            gg = wkb.tunneling_rate(0, x, omega_p)
            ge = wkb.tunneling_rate(1, x, omega_p)
            note = f"raw, omega_p/2pi={float(omega_p_ghz):g} GHz"
        rows.append(("x", x, "1", x, "1"))
    else:
        raise ConfigError(
            "rates needs a tunneling spec: --bias-x, the physical bias "
            "triple --i-over-i0/--i0-ua/--c-pf, or a config file"
        )

    rows.append(("gamma_g", gg, "1/s", seconds_rate_to_internal(gg), "1/ns"))
    rows.append(("gamma_e", ge, "1/s", seconds_rate_to_internal(ge), "1/ns"))

    width = max(len(r[0]) for r in rows)
    print(f"mode: {note}")
    for name, si, si_unit, internal, int_unit in rows:
        print(f"{name:<{width}}  {si:.6e} {si_unit:<6}  {internal:.6e} {int_unit}")

    if args.out:
        out = _out_dir(args)
        path = out / "rates.csv"
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write("quantity,si_value,internal_value\n")
            for name, si, _, internal, _ in rows:
                f.write(f"{name},{_fmt(si)},{_fmt(internal)}\n")
        _write_manifest(path, None, "rates", started, extra={"mode": note})
    return EXIT_OK


def cmd_efficiency(args: argparse.Namespace) -> int:
    started = time.monotonic()
    p = _load_params(args)
    out = _out_dir(args)
    curve = metrics.efficiency_curve(p)
    opt = metrics.optimal_detection(curve)
    path = out / "efficiency.csv"
    _write_csv(path, ("t_ns", "P_n", "P_0", "eta"),
               zip(curve.times, curve.p_n, curve.p_0, curve.eta))
    _write_manifest(path, p, "efficiency", started,
                    checks=_checks_from_meta(curve.meta),
                    extra={"t_d_ns": opt.t_d, "eta_max": opt.eta_max,
                           "plateau_estimate": metrics.plateau_estimate(p)})
    return EXIT_OK


def cmd_bandwidth(args: argparse.Namespace) -> int:
    started = time.monotonic()
    p = _load_params(args)
    out = _out_dir(args)
    workers = _workers(args)
    opt = metrics.optimal_detection(metrics.efficiency_curve(p))
    result = metrics.bandwidth(p, opt.t_d, workers=workers)
    path = out / "bandwidth.csv"
    _write_csv(path, ("delta_over_omega", "eta_at_td"),
               zip(result.scan_delta_over_omega, result.scan_eta))
    _write_manifest(path, p, "bandwidth", started, extra={
        "t_d_ns": result.t_d,
        "eta_zero_detuning": result.eta_zero,
        "width_over_omega": result.width_over_omega,
        "width_definition": "half-width: |detuning| at half the zero-detuning efficiency",
        "delta_minus_rad_ns": result.delta_minus,
        "delta_plus_rad_ns": result.delta_plus,
    })
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    started = time.monotonic()
    p = _load_params(args)
    out = _out_dir(args)
    workers = _workers(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError(f"could not parse sweep values {args.values!r}")
    if not values:
        raise ConfigError("empty sweep axis")
    result = metrics.sweep(p, args.param, values, workers=workers)
    path = out / "sweep.csv"
    _write_csv(path, (args.param, "t_d_ns", "eta_max"),
               [(pt.value, pt.t_d, pt.eta_max) for pt in result.points])
    _write_manifest(path, p, "sweep", started, extra={
        "parameter": args.param,
        "workers": workers,
        "failures": [
            {"value": pt.value, "error": pt.error}
            for pt in result.points if pt.error
        ],
    })
    if result.n_failed:
        print(f"sweep: {result.n_failed} of {len(values)} points failed",
              file=sys.stderr)
        return EXIT_PARTIAL_SWEEP
    return EXIT_OK


def _figure_2(p: SimParams, out: Path, started: float) -> None:
    curve = metrics.efficiency_curve(p)
    checks = _checks_from_meta(curve.meta)
    opt = metrics.optimal_detection(curve)
    extra = {"t_d_ns": opt.t_d, "eta_max": opt.eta_max}
    for stem, column, values in (
        ("fig2_p1", "P_n", curve.p_n),
        ("fig2_p0", "P_0", curve.p_0),
        ("fig2_eta", "eta", curve.eta),
    ):
        path = out / f"{stem}.csv"
        _write_csv(path, ("t_ns", column), zip(curve.times, values))
        _write_manifest(path, p, "figure 2", started, checks=checks, extra=extra)


def _figure_3(p: SimParams, out: Path, started: float, workers: int) -> None:
    for x in FIG3_X:
        px = metrics.with_parameter(p, "bias_x", x)
        opt = metrics.optimal_detection(metrics.efficiency_curve(px))
        result = metrics.bandwidth(px, opt.t_d, workers=workers)
        path = out / f"fig3_x{x:g}.csv"
        _write_csv(path, ("delta_over_omega", "eta_at_td"),
                   zip(result.scan_delta_over_omega, result.scan_eta))
        _write_manifest(path, px, "figure 3", started, extra={
            "bias_x": x,
            "t_d_ns": result.t_d,
            "eta_zero_detuning": result.eta_zero,
            "width_over_omega": result.width_over_omega,
            "width_definition": "half-width: |detuning| at half the zero-detuning efficiency",
        })


def _figure_curve_family(p: SimParams, out: Path, started: float, command: str,
                         parameter: str, values: Sequence[float],
                         stems: Sequence[str]) -> None:
    for value, stem in zip(values, stems):
        pv = metrics.with_parameter(p, parameter, value)
        curve = metrics.efficiency_curve(pv)
        opt = metrics.optimal_detection(curve)
        path = out / f"{stem}.csv"
        _write_csv(path, ("t_ns", "eta"), zip(curve.times, curve.eta))
        _write_manifest(path, pv, command, started,
                        checks=_checks_from_meta(curve.meta),
                        extra={parameter: value, "t_d_ns": opt.t_d,
                               "eta_max": opt.eta_max})


def cmd_figure(args: argparse.Namespace) -> int:
    started = time.monotonic()
    fig = args.id
    if fig not in FIGURE_IDS:
        raise ConfigError(f"unknown figure id {fig!r}; expected one of {FIGURE_IDS}")
    p = _load_params(args)
    out = _out_dir(args)
    workers = _workers(args)
    if fig == "2":
        _figure_2(p, out, started)
    elif fig == "3":
        _figure_3(p, out, started, workers)
    elif fig == "4a":
        _figure_curve_family(
            p, out, started, "figure 4a", "t1_ns", FIG4A_T1_NS,
            [f"fig4a_t1_{t1:g}ns" for t1 in FIG4A_T1_NS])
    elif fig == "4b":
        _figure_curve_family(
            p, out, started, "figure 4b", "bias_x", FIG4B_X,
            [f"fig4b_x{x:g}" for x in FIG4B_X])
    else:
        _figure_curve_family(
            p, out, started, "figure 5", "n_init", FIG5_N,
            [f"fig5_n{n}" for n in FIG5_N])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jjphotond",
        description="Josephson-junction microwave photon detector simulator",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, with_config: bool = True) -> None:
        if with_config:
            sp.add_argument("--config", help="flat JSON config document")
        sp.add_argument("--out", help="output directory (default: current)")
        sp.add_argument("--mode", choices=RATE_MODES,
                        help="override the tunneling rate mode")
        sp.add_argument("--frame", choices=("rotating-secular", "lab-full"),
                        help="override the evolution frame")
        sp.add_argument("--workers", type=int,
                        help="parallel sweep workers (default: JJPHOTOND_WORKERS or 4)")
        sp.add_argument("--stride-ns", type=float, dest="stride_ns",
                        help="override the output stride")
        sp.add_argument("--t-end-ns", type=float, dest="t_end_ns",
                        help="override the simulated horizon")

    sp = sub.add_parser("rates", help="derived junction quantities and escape rates")
    sp.add_argument("--config", help="flat JSON config document")
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--bias-x", type=float, dest="bias_x",
                    help="dimensionless bias x")
    sp.add_argument("--mode", choices=RATE_MODES, help="rate mode for --bias-x")
    sp.add_argument("--omega-p-ghz", type=float, dest="omega_p_ghz",
                    help="attempt frequency for raw mode")
    sp.add_argument("--i-over-i0", type=float, dest="i_over_i0")
    sp.add_argument("--i0-ua", type=float, dest="i0_ua")
    sp.add_argument("--c-pf", type=float, dest="c_pf")
    sp.set_defaults(func=cmd_rates)

    sp = sub.add_parser("efficiency", help="P_n, P_0, eta time series")
    common(sp)
    sp.set_defaults(func=cmd_efficiency)

    sp = sub.add_parser("bandwidth", help="efficiency vs detuning at fixed t_d")
    common(sp)
    sp.set_defaults(func=cmd_bandwidth)

    sp = sub.add_parser("figure", help="CSV set for a built-in reference scenario")
    sp.add_argument("id", choices=FIGURE_IDS)
    common(sp)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("sweep", help="optimum vs one swept parameter")
    common(sp)
    sp.add_argument("--param", required=True, choices=metrics.SWEEP_PARAMETERS)
    sp.add_argument("--values", required=True,
                    help="comma-separated parameter values")
    sp.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError,) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (StiffnessError, IntegrationFailureError) as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except BandwidthRangeError as exc:
        print(f"bandwidth failure: {exc}", file=sys.stderr)
        return EXIT_BANDWIDTH


if __name__ == "__main__":
    sys.exit(main())
