# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled integrator kernel.

Twin of ``_kernels_py.py``.  The arithmetic expressions are kept textually
identical to the pure-Python version and the module is compiled with FP
contraction disabled, so both backends produce bit-identical trajectories.
"""

from libc.math cimport pow

import numpy as np

backend_name = "cython"


cdef inline int _deriv(double nexp, double ad, double bd, double H, int m,
                       double* s, double* out) noexcept nogil:
    cdef double g = s[0]
    cdef double x
    cdef double k1v
    cdef double k2v
    cdef int j
    if g <= 0.0:
        return 2
    x = pow(g, -nexp)
    k1v = H + x
    k2v = H - (nexp - 1.0) * x
    out[0] = s[1]
    out[1] = -g * (ad + bd * (k1v * k2v))
    for j in range(m):
        out[2 + j] = s[2 + m + j]
        out[2 + m + j] = bd * k2v * s[2 + 2 * m + j] - ad * s[2 + j]
        out[2 + 2 * m + j] = -(k2v * s[2 + m + j])
    return 0


def run_combined(double nexp, double ad, double bd, double H,
                 double g0, double p0, c0, double h, int nsteps, double gmax):
    """Fixed-step RK4 on the profile equation plus the riding frame system.

    Same contract as the pure-Python twin: returns (g_array, gprime_array,
    coeff_array, stop_code) with h allowed to be negative.
    """
    cdef int m = len(c0) // 3
    cdef int L = 2 + 3 * m
    cdef double half_h = 0.5 * h
    cdef double sixth_h = h / 6.0

    cdef double buf_a[11]
    cdef double buf_b[11]
    cdef double k1[11]
    cdef double k2[11]
    cdef double k3[11]
    cdef double k4[11]
    cdef double tmp[11]
    cdef double* s = buf_a
    cdef double* new = buf_b
    cdef double* swap

    cdef int i
    cdef int j
    cdef int code = 0
    cdef int count = 0

    s[0] = g0
    s[1] = p0
    for j in range(3 * m):
        s[2 + j] = c0[j]

    g_np = np.empty(nsteps + 1, dtype=np.float64)
    p_np = np.empty(nsteps + 1, dtype=np.float64)
    c_np = np.empty((nsteps + 1, 3 * m), dtype=np.float64)
    cdef double[::1] g_arr = g_np
    cdef double[::1] p_arr = p_np
    cdef double[:, ::1] c_arr = c_np

    g_arr[0] = s[0]
    p_arr[0] = s[1]
    for j in range(3 * m):
        c_arr[0, j] = s[2 + j]

    with nogil:
        while count < nsteps:
            if _deriv(nexp, ad, bd, H, m, s, k1):
                code = 2
                break
            for i in range(L):
                tmp[i] = s[i] + half_h * k1[i]
            if _deriv(nexp, ad, bd, H, m, tmp, k2):
                code = 2
                break
            for i in range(L):
                tmp[i] = s[i] + half_h * k2[i]
            if _deriv(nexp, ad, bd, H, m, tmp, k3):
                code = 2
                break
            for i in range(L):
                tmp[i] = s[i] + h * k3[i]
            if _deriv(nexp, ad, bd, H, m, tmp, k4):
                code = 2
                break
            for i in range(L):
                new[i] = s[i] + sixth_h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if new[0] != new[0] or new[1] != new[1]:
                code = 3
                break
            if new[0] <= 0.0:
                code = 2
                break
            swap = s
            s = new
            new = swap
            count += 1
            g_arr[count] = s[0]
            p_arr[count] = s[1]
            for j in range(3 * m):
                c_arr[count, j] = s[2 + j]
            if s[0] >= gmax:
                code = 1
                break

    return g_np[:count + 1], p_np[:count + 1], c_np[:count + 1], code
