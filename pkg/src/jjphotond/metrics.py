"""Detector observables: switching probability, quantum efficiency,
optimal detection time, plateau estimate, bandwidth, and parameter sweeps.

The switching probability with n photons loaded is P_n(t) = 1 - Tr rho_n(t):
trace leaks through the tunneling term exactly when the junction escapes to
the voltage state.  The quantum efficiency eta_n(t) = P_n(t) - P_0(t)
subtracts the dark counts accumulated from the empty cavity over the same
window.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import BandwidthRangeError
from .liouville import assemble, build_space, pure_state
from .params import SimParams, TimeGrid
from .propagation import Trajectory, evolve

CLAMP_EPS = 1e-9

# bandwidth search, in units of the vacuum Rabi frequency
SCAN_LIMIT = 4.0
SCAN_STEP = 0.1
HALF_TOL = 1e-4
BISECT_MAX_ITER = 80


@dataclass
class EfficiencyCurve:
    """Time series of P_n, P_0 and their difference for one parameter set."""

    times: np.ndarray
    p_n: np.ndarray
    p_0: np.ndarray
    eta: np.ndarray
    n_init: int
    params: SimParams
    meta: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class OptimalPoint:
    """Detection time maximizing the efficiency, with the value there."""

    t_d: float
    eta_max: float
    degenerate: bool = False   # set when the whole curve is flat zero


@dataclass
class BandwidthResult:
    """Detuning response of the efficiency at a fixed detection time.

    width_over_omega is the half-width: the detuning magnitude, in units
    of the vacuum Rabi frequency, at which the efficiency falls to half
    its zero-detuning value (averaged over the two sides).
    """

    eta_zero: float
    delta_minus: float          # rad/ns, negative side crossing
    delta_plus: float           # rad/ns, positive side crossing
    width_over_omega: float
    scan_delta_over_omega: np.ndarray
    scan_eta: np.ndarray
    t_d: float


@dataclass
class SweepPoint:
    value: float
    t_d: float
    eta_max: float
    error: str | None = None


@dataclass
class SweepResult:
    """Per-point optima over one swept parameter, ordered by input index."""

    parameter: str
    values: Sequence[float]
    points: list[SweepPoint]

    @property
    def n_failed(self) -> int:
        return sum(1 for pt in self.points if pt.error is not None)


def switching_probability(traj: Trajectory) -> np.ndarray:
    """P(t) = 1 - Tr rho(t), clamped to [0, 1] only within reporting slop."""
    p = 1.0 - traj.traces()
    p = np.where((p < 0) & (p > -CLAMP_EPS), 0.0, p)
    p = np.where((p > 1) & (p < 1 + CLAMP_EPS), 1.0, p)
    return p


def _merge_meta(tag_a: str, a: Trajectory, tag_b: str, b: Trajectory) -> dict[str, Any]:
    return {
        "n_accepted": a.n_accepted + b.n_accepted,
        "n_rejected": a.n_rejected + b.n_rejected,
        "max_positivity_violation": max(a.max_positivity_violation,
                                        b.max_positivity_violation),
        "max_hermiticity_drift": max(a.max_hermiticity_drift,
                                     b.max_hermiticity_drift),
        "max_trace_uptick": max(a.max_trace_uptick, b.max_trace_uptick),
        "backend": a.backend,
        "runs": [tag_a, tag_b],
    }


def efficiency_curve(p: SimParams, n: int | None = None) -> EfficiencyCurve:
    """eta_n(t) from two evolutions with identical generator and grid.

    Starts |n,g> and |0,g> in the same truncated space and subtracts the
    switching probabilities pointwise.
    """
    if n is None:
        n = p.n_init
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    space = build_space(max(p.n_max, n))
    lv = assemble(p, space)
    traj_n = evolve(lv, pure_state(space, 0, n), p.grid, p.tol)
    traj_0 = evolve(lv, pure_state(space, 0, 0), p.grid, p.tol)
    p_n = switching_probability(traj_n)
    p_0 = switching_probability(traj_0)
    return EfficiencyCurve(
        times=traj_n.times, p_n=p_n, p_0=p_0, eta=p_n - p_0,
        n_init=n, params=p,
        meta=_merge_meta(f"n={n}", traj_n, "n=0", traj_0),
    )


def optimal_detection(curve: EfficiencyCurve) -> OptimalPoint:
    """Grid argmax of eta refined by a quadratic through its neighbors.

    The refinement never moves more than one stride (the curve carries
    Rabi ripples; a larger jump would hop ridges).  Ties break toward the
    earliest time.  A flat all-zero curve returns (0, 0) flagged.
    """
    eta = curve.eta
    times = curve.times
    if eta.size == 0:
        raise ValueError("empty efficiency curve")
    if np.all(eta == 0.0):
        return OptimalPoint(t_d=0.0, eta_max=0.0, degenerate=True)
    i = int(np.argmax(eta))
    t_d, eta_max = float(times[i]), float(eta[i])
    if 0 < i < eta.size - 1:
        y0, y1, y2 = float(eta[i - 1]), float(eta[i]), float(eta[i + 1])
        denom = y0 - 2.0 * y1 + y2
        if denom < 0.0:
            shift = 0.5 * (y0 - y2) / denom
            if abs(shift) <= 1.0:
                h = float(times[i] - times[i - 1])
                t_d = float(times[i]) + shift * h
                eta_max = y1 - 0.25 * (y0 - y2) * shift
    return OptimalPoint(t_d=t_d, eta_max=eta_max)


def plateau_estimate(p: SimParams) -> float:
    """Branching estimate Gamma_e / (Gamma_e + gamma) for the P_n plateau."""
    total = p.gamma_e + p.gamma
    if total <= 0:
        raise ValueError("plateau estimate undefined for gamma_e = gamma = 0")
    return p.gamma_e / total


def _eta_at_fixed_time(p: SimParams, t_d: float) -> Callable[[float], float]:
    """Efficiency evaluator eta(delta) at the fixed detection time."""
    grid = TimeGrid(t_end_ns=t_d, stride_ns=t_d)

    def eta_at(delta: float) -> float:
        curve = efficiency_curve(p.updated(delta=delta, grid=grid))
        return float(curve.eta[-1])

    return eta_at


def _bisect_half(eta_at: Callable[[float], float], half: float,
                 d_inner: float, d_outer: float) -> float:
    """Detuning where eta crosses `half`, to |eta - half| < HALF_TOL."""
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (d_inner + d_outer)
        val = eta_at(mid)
        if abs(val - half) < HALF_TOL:
            return mid
        if val > half:
            d_inner = mid
        else:
            d_outer = mid
    return 0.5 * (d_inner + d_outer)


def find_half_crossings(
    eta_at: Callable[[float], float], omega: float, workers: int = 1,
    scan_step: float = SCAN_STEP,
) -> tuple[float, float, float, np.ndarray, np.ndarray]:
    """Locate the two detunings where eta_at falls to half its value at 0.

    Bracketing scan over [-4, 4] vacuum Rabi frequencies, then bisection
    on each side to |eta - eta(0)/2| < 1e-4.  Returns
    (eta_zero, delta_minus, delta_plus, scan_deltas, scan_etas).
    """
    n_steps = int(round(SCAN_LIMIT / scan_step))
    steps = np.arange(-n_steps, n_steps + 1)
    deltas = steps * (scan_step * omega)
    etas = np.array(list(_map_ordered(eta_at, deltas, workers)))

    i_zero = n_steps
    eta_zero = float(etas[i_zero])
    half = 0.5 * eta_zero

    crossings = []
    for direction in (-1, 1):
        found = None
        for k in range(1, n_steps + 1):
            j_in, j_out = i_zero + direction * (k - 1), i_zero + direction * k
            if etas[j_out] < half <= etas[j_in]:
                found = _bisect_half(eta_at, half,
                                     float(deltas[j_in]), float(deltas[j_out]))
                break
        if found is None:
            raise BandwidthRangeError(
                f"no half-efficiency crossing for delta between 0 and "
                f"{direction * SCAN_LIMIT:g} vacuum Rabi frequencies",
                deltas=deltas / omega, etas=etas,
            )
        crossings.append(found)

    d_minus, d_plus = sorted(crossings)
    return eta_zero, d_minus, d_plus, deltas, etas


def bandwidth(p: SimParams, t_d: float, workers: int = 1) -> BandwidthResult:
    """Half-efficiency detunings at fixed t_d, found by scan plus bisection.

    t_d should come from optimal_detection at zero detuning.  The reported
    width is the half-width (see BandwidthResult).
    """
    omega = p.omega
    eta_at = _eta_at_fixed_time(p, t_d)
    eta_zero, d_minus, d_plus, deltas, etas = find_half_crossings(
        eta_at, omega, workers)
    return BandwidthResult(
        eta_zero=eta_zero,
        delta_minus=d_minus, delta_plus=d_plus,
        width_over_omega=(d_plus - d_minus) / (2.0 * omega),
        scan_delta_over_omega=deltas / omega,
        scan_eta=etas,
        t_d=t_d,
    )


SWEEP_PARAMETERS = ("t1_ns", "bias_x", "delta_over_omega", "n_init")


def with_parameter(p: SimParams, parameter: str, value: float) -> SimParams:
    """Copy of p with one sweepable parameter replaced.

    bias_x rebuilds the tunneling pair through the anchored scaling while
    the junction frequency stays put; n_init moves the truncation with it.
    """
    from . import wkb
    from .params import seconds_rate_to_internal

    if parameter == "t1_ns":
        if value <= 0:
            raise ValueError(f"t1_ns must be positive, got {value}")
        return p.updated(gamma=1.0 / value)
    if parameter == "bias_x":
        gg, ge = wkb.rates_anchored(value)
        return p.updated(gamma_g=seconds_rate_to_internal(gg),
                         gamma_e=seconds_rate_to_internal(ge),
                         rate_mode="anchored", rate_note=f"anchored at x={value:g}")
    if parameter == "delta_over_omega":
        return p.updated(delta=value * p.omega)
    if parameter == "n_init":
        n = int(value)
        if n != value or n < 0:
            raise ValueError(f"n_init must be a nonnegative integer, got {value}")
        return p.updated(n_init=n, n_max=n)
    raise ValueError(
        f"unknown sweep parameter {parameter!r}; expected one of {SWEEP_PARAMETERS}"
    )


def _map_ordered(fn: Callable, values: Sequence, workers: int) -> list:
    """Map preserving input order; thread pool when workers > 1.

    Every point is computed independently of pool size, so results are
    identical for any worker count.
    """
    if workers <= 1 or len(values) <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, values))


def sweep(p: SimParams, parameter: str, values: Sequence[float],
          workers: int = 1) -> SweepResult:
    """Efficiency optimum per value of one parameter, evaluated concurrently.

    Output rows follow the input order regardless of scheduling.  A failing
    point is recorded (NaN fields plus the error text) and the sweep
    continues.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(
            f"unknown sweep parameter {parameter!r}; expected one of {SWEEP_PARAMETERS}"
        )
    values = list(values)

    def run_point(value: float) -> SweepPoint:
        try:
            pt = with_parameter(p, parameter, value)
            opt = optimal_detection(efficiency_curve(pt))
            return SweepPoint(value=value, t_d=opt.t_d, eta_max=opt.eta_max)
        except Exception as exc:  # per-point isolation, sweep must continue
            return SweepPoint(value=value, t_d=math.nan, eta_max=math.nan,
                              error=f"{type(exc).__name__}: {exc}")

    points = _map_ordered(run_point, values, workers)
    return SweepResult(parameter=parameter, values=values, points=points)
