"""Physical constants, unit conversion, and validated simulation parameters.

All simulation code works in internal units of nanoseconds: times in ns,
angular frequencies in rad/ns, rates in 1/ns.  This keeps every
master-equation coefficient within roughly [1e-6, 1e2] so the integrator
never multiplies 1e9-scale frequencies by 1e-9-scale times.  External
input and output stay in the conventional lab units (GHz, MHz, 1/s, ns).

Config documents are flat JSON objects.  Recognized keys:

    omega_eg_ghz                junction transition frequency / 2pi
    delta_ghz | delta_over_omega    cavity-junction detuning
    omega_rabi_mhz              vacuum Rabi frequency / 2pi
    kappa_per_s                 cavity decay rate
    gamma_per_s | t1_ns         junction decay rate (aliases, 1/T1)
    gamma_g_per_s, gamma_e_per_s    explicit tunneling rates, or
    bias_x, rate_mode               dimensionless bias with raw|anchored, or
    i_over_i0, i0_ua, c_pf          physical bias point
    n_init, n_max               initial photons, cavity truncation
    t_end_ns, stride_ns         output grid
    rel_tol, abs_tol            integrator tolerances
    frame                       rotating-secular | lab-full
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Any, Mapping

import numpy as np

from .errors import ConfigError

# Fixed constants; never configurable.
PHI0 = 2.067833848e-15   # magnetic flux quantum h/2e, Wb
HBAR = 1.054571817e-34   # reduced Planck constant, J s

TWO_PI = 2.0 * math.pi

FRAME_ROTATING = "rotating-secular"
FRAME_LAB = "lab-full"
FRAMES = (FRAME_ROTATING, FRAME_LAB)

RATE_MODES = ("raw", "anchored")

#: A raw configuration is the parsed form of a flat JSON config document.
RawConfig = Mapping[str, Any]

_KNOWN_KEYS = {
    "omega_eg_ghz", "delta_ghz", "delta_over_omega", "omega_rabi_mhz",
    "kappa_per_s", "gamma_per_s", "t1_ns", "gamma_g_per_s", "gamma_e_per_s",
    "bias_x", "rate_mode", "i_over_i0", "i0_ua", "c_pf",
    "n_init", "n_max", "t_end_ns", "stride_ns", "rel_tol", "abs_tol", "frame",
}


@dataclass(frozen=True)
class PhysicalConstants:
    """Fixed physical constants used by the junction formulas."""

    flux_quantum: float = PHI0
    hbar: float = HBAR


@dataclass(frozen=True)
class TimeGrid:
    """Uniform output grid: snapshots at 0, stride, 2*stride, ..., t_end (ns)."""

    t_end_ns: float
    stride_ns: float

    def __post_init__(self) -> None:
        if self.t_end_ns <= 0:
            raise ConfigError("t_end_ns must be positive")
        if self.stride_ns <= 0:
            raise ConfigError("stride_ns must be positive")
        n = self.t_end_ns / self.stride_ns
        if abs(n - round(n)) > 1e-6:
            raise ConfigError(
                f"stride_ns={self.stride_ns} does not divide t_end_ns={self.t_end_ns}"
            )

    @property
    def n_points(self) -> int:
        return int(round(self.t_end_ns / self.stride_ns)) + 1

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end_ns, self.n_points)


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self) -> None:
        if self.rel <= 0 or self.abs <= 0:
            raise ConfigError("integrator tolerances must be positive")


@dataclass(frozen=True)
class SimParams:
    """Validated master-equation parameters in internal units (ns, rad/ns).

    Immutable after validation; safe to share across concurrent sweep
    workers without synchronization.
    """

    delta: float          # cavity-junction detuning omega_r - omega_eg, rad/ns
    omega: float          # vacuum Rabi frequency, rad/ns
    kappa: float          # cavity decay rate, 1/ns
    gamma: float          # junction decay rate 1/T1, 1/ns
    gamma_g: float        # ground-state tunneling rate, 1/ns
    gamma_e: float        # excited-state tunneling rate, 1/ns
    omega_eg: float       # junction transition frequency, rad/ns (lab frame)
    n_init: int
    n_max: int
    frame: str = FRAME_ROTATING
    grid: TimeGrid = TimeGrid(200.0, 0.05)
    tol: Tolerances = Tolerances()
    rate_mode: str = "explicit"   # how the tunneling rates were obtained
    rate_note: str = ""           # e.g. which frequency fed the raw formula

    def __post_init__(self) -> None:
        for name in ("omega", "kappa", "gamma", "gamma_g", "gamma_e"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ConfigError(f"{name} must be finite")
        if self.omega <= 0:
            raise ConfigError("omega (vacuum Rabi frequency) must be positive")
        for name in ("kappa", "gamma", "gamma_g", "gamma_e"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.n_init < 0:
            raise ConfigError("n_init must be >= 0")
        if self.n_init > self.n_max:
            raise ConfigError(f"n_init={self.n_init} exceeds n_max={self.n_max}")
        if self.frame not in FRAMES:
            raise ConfigError(f"frame must be one of {FRAMES}, got {self.frame!r}")

    def updated(self, **changes: Any) -> "SimParams":
        return replace(self, **changes)


def seconds_rate_to_internal(rate_per_s: float) -> float:
    """Convert a rate in 1/s to internal units of 1/ns."""
    if rate_per_s < 0:
        raise ConfigError(f"rate must be nonnegative, got {rate_per_s}")
    return rate_per_s * 1e-9


def ghz_to_rad_ns(f_ghz: float) -> float:
    """Convert an ordinary frequency in GHz to angular rad/ns."""
    return TWO_PI * f_ghz


def _get_number(raw: RawConfig, key: str) -> float:
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"config key {key!r} must be a number, got {v!r}")
    return float(v)


def _get_int(raw: RawConfig, key: str) -> int:
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"config key {key!r} must be an integer, got {v!r}")
    return v


def _resolve_gamma(raw: RawConfig) -> float:
    """Junction decay in 1/ns from gamma_per_s, t1_ns, or both (consistent)."""
    has_g = "gamma_per_s" in raw
    has_t1 = "t1_ns" in raw
    if not has_g and not has_t1:
        raise ConfigError("missing junction decay: provide gamma_per_s or t1_ns")
    gamma = None
    if has_g:
        gamma = seconds_rate_to_internal(_get_number(raw, "gamma_per_s"))
    if has_t1:
        t1 = _get_number(raw, "t1_ns")
        if t1 <= 0:
            raise ConfigError("t1_ns must be positive")
        from_t1 = 1.0 / t1
        if gamma is not None:
            scale = max(abs(gamma), abs(from_t1))
            if abs(gamma - from_t1) > 1e-9 * scale:
                raise ConfigError(
                    f"inconsistent gamma_per_s and t1_ns: {gamma} vs {from_t1} 1/ns"
                )
        gamma = from_t1 if gamma is None else gamma
    return gamma


def _resolve_tunneling(raw: RawConfig, omega_eg_ghz: float) -> tuple[float, float, str, str]:
    """Returns (gamma_g, gamma_e) in 1/ns plus (rate_mode, note).

    Exactly one tunneling spec must be present: the explicit rate pair,
    a dimensionless bias with a rate mode, or a physical bias point.
    """
    from . import wkb

    explicit = {"gamma_g_per_s", "gamma_e_per_s"} & set(raw)
    bias = {"bias_x"} & set(raw)
    physical = {"i_over_i0", "i0_ua", "c_pf"} & set(raw)

    groups = [g for g in (explicit, bias, physical) if g]
    if len(groups) == 0:
        raise ConfigError(
            "missing tunneling spec: provide gamma_g_per_s+gamma_e_per_s, "
            "bias_x+rate_mode, or i_over_i0+i0_ua+c_pf"
        )
    if len(groups) > 1:
        keys = sorted(set().union(*groups))
        raise ConfigError(f"conflicting tunneling specs: {', '.join(keys)}")

    if explicit:
        if explicit != {"gamma_g_per_s", "gamma_e_per_s"}:
            missing = {"gamma_g_per_s", "gamma_e_per_s"} - explicit
            raise ConfigError(f"incomplete tunneling spec: missing {missing.pop()}")
        if "rate_mode" in raw:
            raise ConfigError(
                "conflicting tunneling specs: rate_mode with explicit "
                "gamma_g_per_s/gamma_e_per_s"
            )
        gg = seconds_rate_to_internal(_get_number(raw, "gamma_g_per_s"))
        ge = seconds_rate_to_internal(_get_number(raw, "gamma_e_per_s"))
        return gg, ge, "explicit", ""

    if bias:
        if "rate_mode" not in raw:
            raise ConfigError("bias_x requires rate_mode (raw or anchored)")
        mode = raw["rate_mode"]
        if mode not in RATE_MODES:
            raise ConfigError(f"rate_mode must be one of {RATE_MODES}, got {mode!r}")
        x = _get_number(raw, "bias_x")
        if x <= 0:
            raise ConfigError("bias_x must be positive")
        if mode == "anchored":
            gg_s, ge_s = wkb.rates_anchored(x)
            note = f"anchored at x={x:g}"
        else:
            # The raw WKB formula needs an attempt frequency; config documents
            # feed it the junction frequency (recorded in the note).
            omega_p = ghz_to_rad_ns(omega_eg_ghz) * 1e9  # rad/s
            gg_s = wkb.tunneling_rate(0, x, omega_p)
            ge_s = wkb.tunneling_rate(1, x, omega_p)
            note = f"raw formula with omega_p/2pi = omega_eg/2pi = {omega_eg_ghz:g} GHz"
        return (seconds_rate_to_internal(gg_s),
                seconds_rate_to_internal(ge_s), mode, note)

    if physical != {"i_over_i0", "i0_ua", "c_pf"}:
        missing = sorted({"i_over_i0", "i0_ua", "c_pf"} - physical)
        raise ConfigError(f"incomplete tunneling spec: missing {', '.join(missing)}")
    mode = raw.get("rate_mode", "raw")
    if mode not in RATE_MODES:
        raise ConfigError(f"rate_mode must be one of {RATE_MODES}, got {mode!r}")
    b = wkb.JunctionBias(
        i_ratio=_get_number(raw, "i_over_i0"),
        i0=_get_number(raw, "i0_ua") * 1e-6,
        c=_get_number(raw, "c_pf") * 1e-12,
    )
    derived = wkb.derive(b)
    if mode == "anchored":
        gg_s, ge_s = wkb.rates_anchored(derived.x)
        note = f"anchored at x={derived.x:.6g} from physical bias"
    else:
        gg_s, ge_s = derived.gamma_g, derived.gamma_e
        note = f"raw formula with omega_p/2pi = {derived.omega_p / TWO_PI / 1e9:.6g} GHz"
    return (seconds_rate_to_internal(gg_s),
            seconds_rate_to_internal(ge_s), mode, note)


def validate(raw: RawConfig) -> SimParams:
    """Validate a raw config and convert everything to internal units."""
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    if "omega_eg_ghz" not in raw:
        raise ConfigError("missing required key omega_eg_ghz")
    omega_eg_ghz = _get_number(raw, "omega_eg_ghz")
    if omega_eg_ghz <= 0:
        raise ConfigError("omega_eg_ghz must be positive")

    if "omega_rabi_mhz" not in raw:
        raise ConfigError("missing required key omega_rabi_mhz")
    omega = ghz_to_rad_ns(_get_number(raw, "omega_rabi_mhz") * 1e-3)
    if omega <= 0:
        raise ConfigError("omega_rabi_mhz must be positive")

    if "delta_ghz" in raw and "delta_over_omega" in raw:
        raise ConfigError("conflicting keys: delta_ghz and delta_over_omega")
    if "delta_ghz" in raw:
        delta = ghz_to_rad_ns(_get_number(raw, "delta_ghz"))
    elif "delta_over_omega" in raw:
        delta = _get_number(raw, "delta_over_omega") * omega
    else:
        delta = 0.0

    if "kappa_per_s" not in raw:
        raise ConfigError("missing required key kappa_per_s")
    kappa = seconds_rate_to_internal(_get_number(raw, "kappa_per_s"))

    gamma = _resolve_gamma(raw)
    gamma_g, gamma_e, rate_mode, rate_note = _resolve_tunneling(raw, omega_eg_ghz)

    if "n_init" not in raw:
        raise ConfigError("missing required key n_init")
    n_init = _get_int(raw, "n_init")
    n_max = _get_int(raw, "n_max") if "n_max" in raw else n_init

    grid = TimeGrid(
        t_end_ns=_get_number(raw, "t_end_ns") if "t_end_ns" in raw else 200.0,
        stride_ns=_get_number(raw, "stride_ns") if "stride_ns" in raw else 0.05,
    )
    tol = Tolerances(
        rel=_get_number(raw, "rel_tol") if "rel_tol" in raw else 1e-9,
        abs=_get_number(raw, "abs_tol") if "abs_tol" in raw else 1e-12,
    )
    frame = raw.get("frame", FRAME_ROTATING)

    return SimParams(
        delta=delta, omega=omega, kappa=kappa, gamma=gamma,
        gamma_g=gamma_g, gamma_e=gamma_e,
        omega_eg=ghz_to_rad_ns(omega_eg_ghz),
        n_init=n_init, n_max=n_max, frame=frame, grid=grid, tol=tol,
        rate_mode=rate_mode, rate_note=rate_note,
    )


def to_external(p: SimParams) -> dict[str, Any]:
    """Express validated params in external units (explicit tunneling rates).

    validate(to_external(p)) reproduces the same master-equation
    coefficients, so validation is idempotent through this round trip.
    """
    return {
        "omega_eg_ghz": p.omega_eg / TWO_PI,
        "delta_ghz": p.delta / TWO_PI,
        "omega_rabi_mhz": p.omega / TWO_PI * 1e3,
        "kappa_per_s": p.kappa * 1e9,
        "gamma_per_s": p.gamma * 1e9,
        "gamma_g_per_s": p.gamma_g * 1e9,
        "gamma_e_per_s": p.gamma_e * 1e9,
        "n_init": p.n_init,
        "n_max": p.n_max,
        "t_end_ns": p.grid.t_end_ns,
        "stride_ns": p.grid.stride_ns,
        "rel_tol": p.tol.rel,
        "abs_tol": p.tol.abs,
        "frame": p.frame,
    }


def load_config(path: str) -> dict[str, Any]:
    """Read a flat JSON config document."""
    try:
        f = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    with f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config document {path} must be a JSON object")
    return raw


def baseline_config() -> dict[str, Any]:
    """Built-in baseline operating point for the reference scenarios.

    Junction at 4.8 GHz with T1 = 10 ns, cavity decay 1e6 1/s, vacuum Rabi
    frequency 200 MHz, zero detuning, one photon, anchored tunneling rates
    at bias x = 2.
    """
    return {
        "omega_eg_ghz": 4.8,
        "delta_ghz": 0.0,
        "omega_rabi_mhz": 200.0,
        "kappa_per_s": 1e6,
        "t1_ns": 10.0,
        "bias_x": 2.0,
        "rate_mode": "anchored",
        "n_init": 1,
    }
