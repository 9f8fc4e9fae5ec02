"""Time evolution of the density matrix.

Production runs use an adaptive embedded Runge-Kutta 5(4) pair on the
dense superoperator; an exact matrix-exponential propagator serves as the
oracle for cross-checking.  The stepping kernel comes in two flavors
selected at import: the compiled extension `_rkcore` when available, else
the pure-numpy `_rk`.  Set JJPHOTOND_BACKEND=python or =compiled to force
one (benchmarks/bench_backends.py compares them).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from ._rk import STATUS_OK, STATUS_STEP_UNDERFLOW
from .errors import IntegrationFailureError, StiffnessError
from .liouville import Liouvillian, unvec, vec
from .params import TimeGrid, Tolerances

MIN_STEP_NS = 1e-8          # below this the problem is declared stiff
POSITIVITY_ABORT = -1e-8    # most negative eigenvalue tolerated
TRACE_UPTICK_ABORT = 1e-6   # trace increase that aborts the run
HERMITICITY_TOL = 1e-10
EXACT_DIM_SQ_GUARD = 4096   # dense-oracle guard: dim^2 at most this


def _load_kernel():
    choice = os.environ.get("JJPHOTOND_BACKEND", "auto")
    if choice not in ("auto", "compiled", "python"):
        raise ValueError(f"JJPHOTOND_BACKEND must be auto|compiled|python, got {choice!r}")
    if choice in ("auto", "compiled"):
        try:
            from . import _rkcore
            return _rkcore, "compiled"
        except ImportError:
            if choice == "compiled":
                raise
    from . import _rk
    return _rk, "python"


_KERNEL, _BACKEND_NAME = _load_kernel()


def backend() -> str:
    """Name of the active stepping kernel: 'compiled' or 'python'."""
    return _BACKEND_NAME


@dataclass
class Trajectory:
    """Snapshots of the density matrix plus per-run integrator metadata."""

    times: np.ndarray                  # ns, strictly increasing, times[0] = 0
    states: np.ndarray                 # (n_times, dim, dim) complex
    n_accepted: int
    n_rejected: int
    max_positivity_violation: float    # max(0, -min eigenvalue) over snapshots
    max_hermiticity_drift: float       # max ||rho - rho^dag||_inf over snapshots
    max_trace_uptick: float            # largest increase of Tr rho between snapshots
    backend: str = field(default_factory=backend)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def traces(self) -> np.ndarray:
        return np.einsum("tii->t", self.states).real


def _check_initial_state(rho0: np.ndarray, dim: int) -> np.ndarray:
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (dim, dim):
        raise ValueError(f"initial state must be {dim}x{dim}, got {rho0.shape}")
    drift = np.max(np.abs(rho0 - rho0.conj().T))
    if drift > HERMITICITY_TOL:
        raise ValueError(f"initial state is not Hermitian (drift {drift:.2e})")
    return 0.5 * (rho0 + rho0.conj().T)


def evolve_at(
    lv: Liouvillian,
    rho0: np.ndarray,
    times: np.ndarray,
    tol: Tolerances = Tolerances(),
    max_step: float | None = None,
) -> Trajectory:
    """Evolve rho0 under lv, taking snapshots at the given times.

    times must be strictly increasing with times[0] = 0.  Snapshots are
    reached by integrating exactly to each boundary (no interpolation), so
    they carry the integrator's full accuracy.  The state is
    re-symmetrized after every accepted step; all other invariants are
    monitored, never enforced.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("times must be a nonempty 1-d array")
    if times[0] != 0.0:
        raise ValueError("times must start at 0")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")

    dim = lv.dim
    rho0 = _check_initial_state(rho0, dim)
    y0 = vec(rho0)
    h_max = np.inf if max_step is None else float(max_step)

    ys, n_acc, n_rej, status = _KERNEL.propagate(
        lv.matrix, y0, times, tol.rel, tol.abs, dim, h_max, MIN_STEP_NS,
    )
    if status == STATUS_STEP_UNDERFLOW:
        raise StiffnessError(
            f"step size underflowed below {MIN_STEP_NS} ns; the generator is "
            "too stiff for the explicit integrator, use exact_state instead"
        )
    assert status == STATUS_OK

    states = np.asarray(ys).reshape((times.size, dim, dim)).transpose(0, 2, 1)
    # kernel state is column-stacked; reshape above lands row-major, so the
    # transpose restores matrix orientation
    max_drift = 0.0
    max_viol = 0.0
    max_uptick = 0.0
    prev_trace = None
    for idx in range(times.size):
        rho = states[idx]
        drift = float(np.max(np.abs(rho - rho.conj().T)))
        max_drift = max(max_drift, drift)
        tr = float(np.trace(rho).real)
        if prev_trace is not None:
            uptick = tr - prev_trace
            if uptick > TRACE_UPTICK_ABORT:
                raise IntegrationFailureError(
                    f"trace increased by {uptick:.3e} at t={times[idx]:g} ns"
                )
            max_uptick = max(max_uptick, uptick)
        if tr > 1.0 + TRACE_UPTICK_ABORT or tr < -TRACE_UPTICK_ABORT:
            raise IntegrationFailureError(
                f"trace {tr:.6f} outside [0, 1] at t={times[idx]:g} ns"
            )
        prev_trace = tr
        min_eig = float(np.linalg.eigvalsh(rho)[0])
        if min_eig < POSITIVITY_ABORT:
            raise IntegrationFailureError(
                f"negative eigenvalue {min_eig:.3e} at t={times[idx]:g} ns "
                "(positivity is monitored, not enforced; this points at a "
                "generator or tolerance problem)"
            )
        max_viol = max(max_viol, -min_eig if min_eig < 0 else 0.0)

    return Trajectory(
        times=times, states=states,
        n_accepted=n_acc, n_rejected=n_rej,
        max_positivity_violation=max_viol,
        max_hermiticity_drift=max_drift,
        max_trace_uptick=max_uptick,
    )


def evolve(
    lv: Liouvillian,
    rho0: np.ndarray,
    grid: TimeGrid,
    tol: Tolerances = Tolerances(),
    max_step: float | None = None,
) -> Trajectory:
    """Evolve rho0 over a uniform output grid."""
    return evolve_at(lv, rho0, grid.times(), tol, max_step)


def exact_state(lv: Liouvillian, rho0: np.ndarray, t: float) -> np.ndarray:
    """Exact rho(t) = expm(L t) rho0 via scaling-and-squaring.

    Valid because the generator is time independent.  Refuses dimensions
    beyond the desk-scale guard; this is a verification oracle, not a
    production path.
    """
    dim = lv.dim
    if dim * dim > EXACT_DIM_SQ_GUARD:
        raise ValueError(
            f"exact propagator limited to dim^2 <= {EXACT_DIM_SQ_GUARD}, "
            f"got dim={dim}"
        )
    rho0 = _check_initial_state(rho0, dim)
    prop = expm(lv.matrix * float(t))
    return unvec(prop @ vec(rho0), dim)
