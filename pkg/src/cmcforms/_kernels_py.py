"""Pure-Python integrator kernel.

Fallback twin of the compiled kernel in ``_kernels.pyx``.  Every arithmetic
expression here is written in exactly the same order as in the compiled
version (and the extension is built with FP contraction off), so the two
backends produce bit-identical trajectories.

State vector layout: s[0] = g, s[1] = g', then m coefficients of alpha,
m of alpha', m of beta (m = 0 profile-only, 2 when a = 0, 3 when a != 0).

Stop codes: 0 span completed, 1 truncated at g >= gmax, 2 g reached <= 0
(offending step not stored), 3 non-finite state (not stored).
"""

import numpy as np

backend_name = "python"


def _deriv(nexp, ad, bd, H, m, s, out):
    g = s[0]
    if g <= 0.0:
        return 2
    x = g ** (-nexp)
    k1v = H + x
    k2v = H - (nexp - 1.0) * x
    out[0] = s[1]
    out[1] = -g * (ad + bd * (k1v * k2v))
    for j in range(m):
        out[2 + j] = s[2 + m + j]
        out[2 + m + j] = bd * k2v * s[2 + 2 * m + j] - ad * s[2 + j]
        out[2 + 2 * m + j] = -(k2v * s[2 + m + j])
    return 0


def run_combined(nexp, ad, bd, H, g0, p0, c0, h, nsteps, gmax):
    """Fixed-step RK4 on the profile equation plus the riding frame system.

    Returns (g_array, gprime_array, coeff_array, stop_code); the arrays hold
    the accepted states, coeff_array has one row per state with the 3*m
    coefficients.  h may be negative (backward half of a span).
    """
    m = len(c0) // 3
    L = 2 + 3 * m
    half_h = 0.5 * h
    sixth_h = h / 6.0

    s = [0.0] * L
    s[0] = g0
    s[1] = p0
    for j in range(3 * m):
        s[2 + j] = c0[j]

    k1 = [0.0] * L
    k2 = [0.0] * L
    k3 = [0.0] * L
    k4 = [0.0] * L
    tmp = [0.0] * L
    new = [0.0] * L

    gs = [g0]
    ps = [p0]
    cs = [tuple(s[2:])]
    code = 0

    for _ in range(nsteps):
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
        s, new = new, s
        gs.append(s[0])
        ps.append(s[1])
        cs.append(tuple(s[2:]))
        if s[0] >= gmax:
            code = 1
            break

    g_arr = np.array(gs, dtype=np.float64)
    p_arr = np.array(ps, dtype=np.float64)
    c_arr = np.array(cs, dtype=np.float64).reshape(len(gs), 3 * m)
    return g_arr, p_arr, c_arr, code
