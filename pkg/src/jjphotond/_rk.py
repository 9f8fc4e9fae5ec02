"""Pure-numpy adaptive Dormand-Prince 5(4) stepper for y' = L y.

Fallback for the compiled kernel in _rkcore; both implement the same
algorithm with identical coefficients and step-size control so either
backend satisfies the propagation contract.  The state is the
column-stacked vectorization of a dim x dim density matrix, and the
matrix is re-symmetrized after every accepted step.
"""

from __future__ import annotations

import math

import numpy as np

# Dormand-Prince 5(4) tableau.  The first row of weights propagates the
# 5th-order solution; B_ERR are the differences to the embedded 4th-order
# weights and feed the local error estimate.
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = (
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
)
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
B_ERR = np.array([
    71 / 57600, 0.0, -71 / 16695, 71 / 1920,
    -17253 / 339200, 22 / 525, -1 / 40,
])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
ORDER_EXP = 0.2   # 1/5 for a 5th-order propagating solution

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1


def _symmetrize(y: np.ndarray, dim: int) -> np.ndarray:
    rho = y.reshape((dim, dim), order="F")
    rho = 0.5 * (rho + rho.conj().T)
    return rho.reshape(-1, order="F")


def _error_norm(err: np.ndarray, y0: np.ndarray, y1: np.ndarray,
                rtol: float, atol: float) -> float:
    scale = atol + rtol * np.maximum(np.abs(y0), np.abs(y1))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def _initial_step(L: np.ndarray, y0: np.ndarray, rtol: float, atol: float,
                  max_step: float) -> float:
    f0 = L @ y0
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h = 1e-3 if d1 <= 1e-30 else 1e-2 * d0 / d1
    return min(h, max_step)


def propagate(L: np.ndarray, y0: np.ndarray, t_out: np.ndarray,
              rtol: float, atol: float, dim: int,
              max_step: float, min_step: float) -> tuple[np.ndarray, int, int, int]:
    """Integrate to every time in t_out (strictly increasing, t_out[0] first).

    Returns (states at t_out, accepted steps, rejected steps, status).
    Steps never overshoot the next output time, so snapshots are taken
    exactly at the requested times with no interpolation.
    """
    m = y0.shape[0]
    n_out = t_out.shape[0]
    out = np.empty((n_out, m), dtype=complex)
    out[0] = y0

    y = y0.astype(complex, copy=True)
    t = float(t_out[0])
    n_accept = 0
    n_reject = 0
    h = _initial_step(L, y, rtol, atol, max_step)

    k = np.empty((7, m), dtype=complex)
    for i_out in range(1, n_out):
        target = float(t_out[i_out])
        # stop once within roundoff of the boundary; the final capped step
        # cannot always land exactly on it
        t_edge = 1e-13 * max(1.0, abs(target))
        while target - t > t_edge:
            if h < min_step:
                return out, n_accept, n_reject, STATUS_STEP_UNDERFLOW
            h_try = min(h, max_step, target - t)
            capped = h_try < h

            k[0] = L @ y
            for s in range(1, 6):
                k[s] = L @ (y + h_try * (A[s - 1] @ k[:s]))
            # the last stage evaluates at the 5th-order solution point
            y_new = y + h_try * (B5 @ k[:6])
            k[6] = L @ y_new
            err_vec = h_try * (B_ERR @ k)
            err = _error_norm(err_vec, y, y_new, rtol, atol)

            if err <= 1.0:
                t = t + h_try
                y = _symmetrize(y_new, dim)
                n_accept += 1
                factor = MAX_FACTOR if err == 0.0 else min(
                    MAX_FACTOR, max(MIN_FACTOR, SAFETY * err ** -ORDER_EXP))
                # a boundary- or max_step-capped step must not shrink the
                # controller below its previous value
                h = max(h, h_try * factor) if capped else h_try * factor
            else:
                n_reject += 1
                h = h_try * max(MIN_FACTOR, SAFETY * err ** -ORDER_EXP)
        t = target
        out[i_out] = y
    return out, n_accept, n_reject, STATUS_OK
