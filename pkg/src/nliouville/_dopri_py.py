"""Pure-Python Dormand-Prince 5(4) stepper for the radial flux system.

Mirrors ``_dopri.pyx`` line for line; used when the compiled module is
missing or ``NLIOUVILLE_PURE_PYTHON`` is set.

State ``y = (U, F, M)`` in the variable ``s = log r``::

    dU/ds = sign(F) |F|^(1/(n-1))
    dF/ds = -exp(n s + U)
    dM/ds = +exp(n s + U)
"""

import math

import numpy as np

STATUS_OK = 0
STATUS_MAX_STEPS = 1
STATUS_NONFINITE = 2
STATUS_STEP_UNDERFLOW = 3

# Dormand-Prince tableau
C2, C3, C4, C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                           49.0 / 176.0, -5103.0 / 18656.0)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4, E5, E6, E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 5.0


def integrate_flux(n, s0, y0, s_out, rtol, atol, h_init, max_steps):
    """Integrate the flux system from ``s0`` through the points ``s_out``.

    ``s_out`` must be monotone in the direction of integration. Returns
    ``(Y, nsteps, status, s_last)`` with ``Y`` of shape ``(len(s_out), 3)``;
    rows past a failure are NaN and ``s_last`` is the last accepted abscissa.
    """
    s_out = np.asarray(s_out, dtype=float)
    nout = s_out.shape[0]
    Y = np.full((nout, 3), np.nan)
    inv = 1.0 / (n - 1)
    nf = float(n)

    def rhs(s, u, f):
        g = math.exp(nf * s + u)
        if f == 0.0:
            du = 0.0
        else:
            du = math.copysign(abs(f) ** inv, f)
        return du, -g, g

    s = float(s0)
    u, f, m = (float(v) for v in y0)
    if nout == 0:
        return Y, 0, STATUS_OK, s
    direction = 1.0 if s_out[-1] >= s else -1.0
    h = abs(h_init) if h_init != 0.0 else 1e-6
    nsteps = 0

    k1u, k1f, k1m = rhs(s, u, f)
    for j in range(nout):
        target = float(s_out[j])
        while (target - s) * direction > 0.0:
            if nsteps >= max_steps:
                return Y, nsteps, STATUS_MAX_STEPS, s
            remaining = abs(target - s)
            clipped = h >= remaining
            hs = remaining if clipped else h
            if hs < 1e-14 * max(1.0, abs(s)):
                return Y, nsteps, STATUS_STEP_UNDERFLOW, s
            dh = direction * hs

            try:
                k2u, k2f, k2m = rhs(s + C2 * dh,
                                    u + dh * A21 * k1u,
                                    f + dh * A21 * k1f)
                k3u, k3f, k3m = rhs(s + C3 * dh,
                                    u + dh * (A31 * k1u + A32 * k2u),
                                    f + dh * (A31 * k1f + A32 * k2f))
                k4u, k4f, k4m = rhs(s + C4 * dh,
                                    u + dh * (A41 * k1u + A42 * k2u + A43 * k3u),
                                    f + dh * (A41 * k1f + A42 * k2f + A43 * k3f))
                k5u, k5f, k5m = rhs(s + C5 * dh,
                                    u + dh * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u),
                                    f + dh * (A51 * k1f + A52 * k2f + A53 * k3f + A54 * k4f))
                k6u, k6f, k6m = rhs(s + dh,
                                    u + dh * (A61 * k1u + A62 * k2u + A63 * k3u
                                              + A64 * k4u + A65 * k5u),
                                    f + dh * (A61 * k1f + A62 * k2f + A63 * k3f
                                              + A64 * k4f + A65 * k5f))
            except OverflowError:
                return Y, nsteps, STATUS_NONFINITE, s
            un = u + dh * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u)
            fn = f + dh * (B1 * k1f + B3 * k3f + B4 * k4f + B5 * k5f + B6 * k6f)
            mn = m + dh * (B1 * k1m + B3 * k3m + B4 * k4m + B5 * k5m + B6 * k6m)
            try:
                k7u, k7f, k7m = rhs(s + dh, un, fn)
            except OverflowError:
                return Y, nsteps, STATUS_NONFINITE, s
            if not (math.isfinite(un) and math.isfinite(fn) and math.isfinite(mn)):
                return Y, nsteps, STATUS_NONFINITE, s

            eu = dh * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * k7u)
            ef = dh * (E1 * k1f + E3 * k3f + E4 * k4f + E5 * k5f + E6 * k6f + E7 * k7f)
            em = dh * (E1 * k1m + E3 * k3m + E4 * k4m + E5 * k5m + E6 * k6m + E7 * k7m)
            su = atol + rtol * max(abs(u), abs(un))
            sf = atol + rtol * max(abs(f), abs(fn))
            sm = atol + rtol * max(abs(m), abs(mn))
            err = math.sqrt(((eu / su) ** 2 + (ef / sf) ** 2 + (em / sm) ** 2) / 3.0)
            nsteps += 1

            if err <= 1.0:
                s = target if clipped else s + dh
                u, f, m = un, fn, mn
                k1u, k1f, k1m = k7u, k7f, k7m
                fac = FAC_MAX if err == 0.0 else min(FAC_MAX, max(FAC_MIN, SAFETY * err ** -0.2))
                # a clipped step says nothing about how far we could have gone
                if not clipped or fac < 1.0:
                    h = hs * fac
            else:
                h = hs * max(FAC_MIN, SAFETY * err ** -0.2)
        Y[j, 0] = u
        Y[j, 1] = f
        Y[j, 2] = m
    return Y, nsteps, STATUS_OK, s
