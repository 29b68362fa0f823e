# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) stepper for the radial flux system.

Same algorithm, constants and step control as ``_dopri_py``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs, pow, copysign, sqrt, isfinite, fmax, fmin

cnp.import_array()

DEF C2 = 1.0 / 5.0
DEF C3 = 3.0 / 10.0
DEF C4 = 4.0 / 5.0
DEF C5 = 8.0 / 9.0
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
DEF SAFETY = 0.9
DEF FAC_MIN = 0.2
DEF FAC_MAX = 5.0

STATUS_OK = 0
STATUS_MAX_STEPS = 1
STATUS_NONFINITE = 2
STATUS_STEP_UNDERFLOW = 3


cdef inline void _rhs(double nf, double inv, double s, double u, double f,
                      double* du, double* df, double* dm) nogil:
    cdef double g = exp(nf * s + u)
    if f == 0.0:
        du[0] = 0.0
    else:
        du[0] = copysign(pow(fabs(f), inv), f)
    df[0] = -g
    dm[0] = g


def integrate_flux(int n, double s0, y0, s_out, double rtol, double atol,
                   double h_init, long max_steps):
    """Integrate the flux system from ``s0`` through the points ``s_out``.

    Returns ``(Y, nsteps, status, s_last)``; see ``_dopri_py.integrate_flux``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] so = np.ascontiguousarray(s_out, dtype=np.float64)
    cdef Py_ssize_t nout = so.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Y = np.full((nout, 3), np.nan)
    cdef double nf = <double>n
    cdef double inv = 1.0 / (n - 1)
    cdef double s = s0
    cdef double u = float(y0[0]), f = float(y0[1]), m = float(y0[2])
    cdef double direction, h, target, remaining, hs, dh, err, fac
    cdef double k1u, k1f, k1m, k2u, k2f, k2m, k3u, k3f, k3m, k4u, k4f, k4m
    cdef double k5u, k5f, k5m, k6u, k6f, k6m, k7u, k7f, k7m
    cdef double un, fn, mn, eu, ef, em, su, sf, sm
    cdef long nsteps = 0
    cdef bint clipped
    cdef Py_ssize_t j

    if nout == 0:
        return Y, 0, STATUS_OK, s
    direction = 1.0 if so[nout - 1] >= s else -1.0
    h = fabs(h_init) if h_init != 0.0 else 1e-6

    _rhs(nf, inv, s, u, f, &k1u, &k1f, &k1m)
    for j in range(nout):
        target = so[j]
        while (target - s) * direction > 0.0:
            if nsteps >= max_steps:
                return Y, nsteps, STATUS_MAX_STEPS, s
            remaining = fabs(target - s)
            clipped = h >= remaining
            hs = remaining if clipped else h
            if hs < 1e-14 * fmax(1.0, fabs(s)):
                return Y, nsteps, STATUS_STEP_UNDERFLOW, s
            dh = direction * hs

            _rhs(nf, inv, s + C2 * dh, u + dh * A21 * k1u, f + dh * A21 * k1f,
                 &k2u, &k2f, &k2m)
            _rhs(nf, inv, s + C3 * dh,
                 u + dh * (A31 * k1u + A32 * k2u),
                 f + dh * (A31 * k1f + A32 * k2f), &k3u, &k3f, &k3m)
            _rhs(nf, inv, s + C4 * dh,
                 u + dh * (A41 * k1u + A42 * k2u + A43 * k3u),
                 f + dh * (A41 * k1f + A42 * k2f + A43 * k3f), &k4u, &k4f, &k4m)
            _rhs(nf, inv, s + C5 * dh,
                 u + dh * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u),
                 f + dh * (A51 * k1f + A52 * k2f + A53 * k3f + A54 * k4f),
                 &k5u, &k5f, &k5m)
            _rhs(nf, inv, s + dh,
                 u + dh * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u),
                 f + dh * (A61 * k1f + A62 * k2f + A63 * k3f + A64 * k4f + A65 * k5f),
                 &k6u, &k6f, &k6m)
            un = u + dh * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u)
            fn = f + dh * (B1 * k1f + B3 * k3f + B4 * k4f + B5 * k5f + B6 * k6f)
            mn = m + dh * (B1 * k1m + B3 * k3m + B4 * k4m + B5 * k5m + B6 * k6m)
            _rhs(nf, inv, s + dh, un, fn, &k7u, &k7f, &k7m)
            if not (isfinite(un) and isfinite(fn) and isfinite(mn) and isfinite(k7f)
                    and isfinite(k2f) and isfinite(k3f) and isfinite(k4f)
                    and isfinite(k5f) and isfinite(k6f)):
                return Y, nsteps, STATUS_NONFINITE, s

            eu = dh * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * k7u)
            ef = dh * (E1 * k1f + E3 * k3f + E4 * k4f + E5 * k5f + E6 * k6f + E7 * k7f)
            em = dh * (E1 * k1m + E3 * k3m + E4 * k4m + E5 * k5m + E6 * k6m + E7 * k7m)
            su = atol + rtol * fmax(fabs(u), fabs(un))
            sf = atol + rtol * fmax(fabs(f), fabs(fn))
            sm = atol + rtol * fmax(fabs(m), fabs(mn))
            err = sqrt(((eu / su) ** 2 + (ef / sf) ** 2 + (em / sm) ** 2) / 3.0)
            nsteps += 1

            if err <= 1.0:
                s = target if clipped else s + dh
                u = un
                f = fn
                m = mn
                k1u = k7u
                k1f = k7f
                k1m = k7m
                fac = FAC_MAX if err == 0.0 else fmin(FAC_MAX, fmax(FAC_MIN, SAFETY * pow(err, -0.2)))
                if not clipped or fac < 1.0:
                    h = hs * fac
            else:
                h = hs * fmax(FAC_MIN, SAFETY * pow(err, -0.2))
        Y[j, 0] = u
        Y[j, 1] = f
        Y[j, 2] = m
    return Y, nsteps, STATUS_OK, s
