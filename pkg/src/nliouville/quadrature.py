"""Quadrature on logarithmic grids with closed-form power-law tails.

Radial masses are integrals of ``g(s) = r^k e^{U(r)}`` over ``s = log r``;
both ends decay exponentially in ``s`` for the profiles this package
handles, so the missing pieces beyond a finite grid are power-law tails
``int g = g_end / |kappa|`` with ``kappa = d log g / ds`` at the end.
"""

import math

import numpy as np

from nliouville.errors import DomainError

__all__ = [
    "log_grid",
    "gauss_cumulative",
    "power_tail",
    "trapezoid_richardson",
    "cumulative_simpson",
]


def log_grid(r_min, r_max, per_decade, include=None):
    """Log-spaced abscissae ``s = log r`` from ``r_min`` to ``r_max``.

    ``per_decade`` points per factor of ten (rounded up to cover the span).
    If ``include`` is a radius inside the span, the grid is split there so
    that ``log(include)`` is hit exactly.
    """
    if not 0 < r_min < r_max:
        raise DomainError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    a, b = math.log(r_min), math.log(r_max)
    if include is None:
        k = max(2, math.ceil(per_decade * (b - a) / math.log(10.0)))
        return np.linspace(a, b, k + 1)
    c = math.log(include)
    if not a < c < b:
        raise DomainError(f"include={include} lies outside ({r_min}, {r_max})")
    left = log_grid(r_min, include, per_decade)
    right = log_grid(include, r_max, per_decade)
    left[-1] = c
    right[0] = c
    return np.concatenate([left, right[1:]])


def gauss_cumulative(g, s, order=8):
    """Cumulative integral of ``g`` over the nodes ``s`` (Gauss-Legendre per cell).

    ``g`` is a vectorized callable of ``s``. Returns an array ``C`` with
    ``C[0] = 0`` and ``C[i] = int_{s[0]}^{s[i]} g``.
    """
    s = np.asarray(s, dtype=float)
    x, w = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (s[1:] + s[:-1])
    half = 0.5 * (s[1:] - s[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(g(nodes), dtype=float)
    cells = half * (vals @ w)
    out = np.empty_like(s)
    out[0] = 0.0
    np.cumsum(cells, out=out[1:])
    return out


def power_tail(g_end, kappa, end):
    """Integral of ``g_end * exp(kappa (s - s_end))`` beyond the grid end.

    ``end`` is ``"origin"`` (integrate to ``s -> -inf``, needs ``kappa > 0``)
    or ``"infinity"`` (``s -> +inf``, needs ``kappa < 0``). Returns ``inf``
    when the tail does not converge.
    """
    if end == "origin":
        return g_end / kappa if kappa > 0 else math.inf
    if end == "infinity":
        return g_end / -kappa if kappa < 0 else math.inf
    raise DomainError(f"end must be 'origin' or 'infinity', got {end!r}")


def trapezoid_richardson(g, a, b, panels=2048):
    """Trapezoid rule on ``[a, b]`` with ``panels`` and ``2*panels``, extrapolated once."""
    if b < a:
        return -trapezoid_richardson(g, b, a, panels)
    if b == a:
        return 0.0
    coarse = np.linspace(a, b, panels + 1)
    fine = np.linspace(a, b, 2 * panels + 1)
    t1 = np.trapezoid(g(coarse), coarse)
    t2 = np.trapezoid(g(fine), fine)
    return (4.0 * t2 - t1) / 3.0


def cumulative_simpson(y, h):
    """Cumulative integral of samples ``y`` on a uniform grid of spacing ``h``.

    Even nodes use composite Simpson; odd nodes add the one-panel rule
    ``h (5 y0 + 8 y1 - y2) / 12`` to the previous even node. The first
    entry is zero. Needs at least three samples.
    """
    y = np.asarray(y, dtype=float)
    m = y.shape[0]
    if m < 3:
        raise DomainError("cumulative_simpson needs at least 3 samples")
    out = np.zeros(m)
    pairs = (m - 1) // 2
    even = h / 3.0 * (y[0:2 * pairs:2] + 4.0 * y[1:2 * pairs:2] + y[2:2 * pairs + 1:2])
    out[2:2 * pairs + 1:2] = np.cumsum(even)
    # half panel [x_{2k}, x_{2k+1}] from the parabola through three nodes
    k = np.arange(0, m - 1, 2)
    lo = k[k + 2 < m]
    out[lo + 1] = out[lo] + h / 12.0 * (5.0 * y[lo] + 8.0 * y[lo + 1] - y[lo + 2])
    if (m - 1) % 2 == 1:
        # trailing odd node: integrate backward from the parabola on the last three nodes
        out[m - 1] = out[m - 2] + h / 12.0 * (-y[m - 3] + 8.0 * y[m - 2] + 5.0 * y[m - 1])
    return out
