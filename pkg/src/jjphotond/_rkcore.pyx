# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Dormand-Prince 5(4) stepper for y' = L y.

Same algorithm, coefficients, and step-size control as the pure-numpy
reference in _rk.py; the hot loop runs without the GIL so sweep workers
can overlap.
"""

import numpy as np

cimport numpy as cnp

from libc.math cimport pow, sqrt

cnp.import_array()

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1

DEF SAFETY = 0.9
DEF MIN_FACTOR = 0.2
DEF MAX_FACTOR = 5.0

# Dormand-Prince 5(4) tableau
DEF A21 = 1.0 / 5.0
DEF A31 = 3.0 / 40.0
DEF A32 = 9.0 / 40.0
DEF A41 = 44.0 / 45.0
DEF A42 = -56.0 / 15.0
DEF A43 = 32.0 / 9.0
DEF A51 = 19372.0 / 6561.0
DEF A52 = -25360.0 / 2187.0
DEF A53 = 64448.0 / 6561.0
DEF A54 = -212.0 / 729.0
DEF A61 = 9017.0 / 3168.0
DEF A62 = -355.0 / 33.0
DEF A63 = 46732.0 / 5247.0
DEF A64 = 49.0 / 176.0
DEF A65 = -5103.0 / 18656.0
DEF B1 = 35.0 / 384.0
DEF B3 = 500.0 / 1113.0
DEF B4 = 125.0 / 192.0
DEF B5 = -2187.0 / 6784.0
DEF B6 = 11.0 / 84.0
DEF E1 = 71.0 / 57600.0
DEF E3 = -71.0 / 16695.0
DEF E4 = 71.0 / 1920.0
DEF E5 = -17253.0 / 339200.0
DEF E6 = 22.0 / 525.0
DEF E7 = -1.0 / 40.0


cdef void _matvec(double complex[:, ::1] L, double complex[::1] x,
                  double complex[::1] out, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double complex acc
    for i in range(m):
        acc = 0
        for j in range(m):
            acc = acc + L[i, j] * x[j]
        out[i] = acc


def propagate(L, y0, t_out, double rtol, double atol, int dim,
              double max_step, double min_step):
    """Integrate to every time in t_out; see _rk.propagate for the contract."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] L_arr = np.ascontiguousarray(L, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] y_arr = np.array(y0, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t_arr = np.ascontiguousarray(t_out, dtype=np.float64)
    cdef Py_ssize_t m = y_arr.shape[0]
    cdef Py_ssize_t n_out = t_arr.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out_arr = np.empty((n_out, m), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] work = np.empty((9, m), dtype=np.complex128)

    cdef double complex[:, ::1] Lv = L_arr
    cdef double complex[::1] y = y_arr
    cdef double[::1] ts = t_arr
    cdef double complex[:, ::1] out = out_arr
    cdef double complex[::1] k1 = work[0]
    cdef double complex[::1] k2 = work[1]
    cdef double complex[::1] k3 = work[2]
    cdef double complex[::1] k4 = work[3]
    cdef double complex[::1] k5 = work[4]
    cdef double complex[::1] k6 = work[5]
    cdef double complex[::1] k7 = work[6]
    cdef double complex[::1] ytmp = work[7]
    cdef double complex[::1] ynew = work[8]

    cdef Py_ssize_t i, j, i_out, d = dim
    cdef long n_accept = 0, n_reject = 0
    cdef int status = 0
    cdef bint capped = False
    cdef double t, target, h, h_try, err, sc, acc, d0, d1, factor, t_edge
    cdef double complex e, v

    with nogil:
        for i in range(m):
            out[0, i] = y[i]
        t = ts[0]

        # initial step size from the scaled magnitudes of y and L y
        _matvec(Lv, y, k1, m)
        d0 = 0.0
        d1 = 0.0
        for i in range(m):
            sc = atol + rtol * cabs(y[i])
            d0 += (cabs(y[i]) / sc) ** 2
            d1 += (cabs(k1[i]) / sc) ** 2
        d0 = sqrt(d0 / m)
        d1 = sqrt(d1 / m)
        if d1 <= 1e-30:
            h = 1e-3
        else:
            h = 1e-2 * d0 / d1
        if h > max_step:
            h = max_step

        for i_out in range(1, n_out):
            target = ts[i_out]
            # stop once within roundoff of the boundary; the final capped
            # step cannot always land exactly on it
            t_edge = 1e-13
            if target > 1.0 or target < -1.0:
                t_edge = 1e-13 * target if target > 0 else -1e-13 * target
            while target - t > t_edge and status == 0:
                if h < min_step:
                    status = 1
                    break
                h_try = h
                if h_try > max_step:
                    h_try = max_step
                if h_try > target - t:
                    h_try = target - t
                capped = h_try < h

                _matvec(Lv, y, k1, m)
                for i in range(m):
                    ytmp[i] = y[i] + h_try * (A21 * k1[i])
                _matvec(Lv, ytmp, k2, m)
                for i in range(m):
                    ytmp[i] = y[i] + h_try * (A31 * k1[i] + A32 * k2[i])
                _matvec(Lv, ytmp, k3, m)
                for i in range(m):
                    ytmp[i] = y[i] + h_try * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
                _matvec(Lv, ytmp, k4, m)
                for i in range(m):
                    ytmp[i] = y[i] + h_try * (A51 * k1[i] + A52 * k2[i]
                                              + A53 * k3[i] + A54 * k4[i])
                _matvec(Lv, ytmp, k5, m)
                for i in range(m):
                    ytmp[i] = y[i] + h_try * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i]
                                              + A64 * k4[i] + A65 * k5[i])
                _matvec(Lv, ytmp, k6, m)
                for i in range(m):
                    ynew[i] = y[i] + h_try * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i]
                                              + B5 * k5[i] + B6 * k6[i])
                _matvec(Lv, ynew, k7, m)

                acc = 0.0
                for i in range(m):
                    e = h_try * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i]
                                 + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
                    sc = cabs(y[i])
                    if cabs(ynew[i]) > sc:
                        sc = cabs(ynew[i])
                    sc = atol + rtol * sc
                    acc += (cabs(e) / sc) ** 2
                err = sqrt(acc / m)

                if err <= 1.0:
                    t = t + h_try
                    # re-symmetrize rho <- (rho + rho^dag)/2 (column stacking)
                    for j in range(d):
                        for i in range(j, d):
                            v = 0.5 * (ynew[i + d * j] + conj(ynew[j + d * i]))
                            y[i + d * j] = v
                            y[j + d * i] = conj(v)
                    n_accept += 1
                    if err == 0.0:
                        factor = MAX_FACTOR
                    else:
                        factor = SAFETY * pow(err, -0.2)
                        if factor > MAX_FACTOR:
                            factor = MAX_FACTOR
                        elif factor < MIN_FACTOR:
                            factor = MIN_FACTOR
                    # a boundary- or max_step-capped step must not shrink
                    # the controller below its previous value
                    if capped:
                        if h_try * factor > h:
                            h = h_try * factor
                    else:
                        h = h_try * factor
                else:
                    n_reject += 1
                    factor = SAFETY * pow(err, -0.2)
                    if factor < MIN_FACTOR:
                        factor = MIN_FACTOR
                    h = h_try * factor
            if status != 0:
                break
            t = target
            for i in range(m):
                out[i_out, i] = y[i]

    return out_arr, int(n_accept), int(n_reject), int(status)
