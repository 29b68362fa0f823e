"""Pohozaev balance on annuli for radial profiles.

For a radial solution of ``-D_n u = |x|^{n a} e^u`` on ``R^n \\ {0}`` and an
annulus ``eps < |x| < R``::

    n (a+1) int_A |x|^{n a} e^u  =  B(R) - B(eps),
    B(r) = n w_n [ r^{n(a+1)} e^{U(r)} + (n-1)/n |r U'(r)|^n ].

Letting ``eps -> 0`` and ``R -> inf`` turns this into a relation between
the masses at the two ends, see :func:`mass_balance_residual`.
"""

import math
from dataclasses import dataclass

import numpy as np

from nliouville.dimension import Dimension
from nliouville.errors import DomainError
from nliouville.quadrature import trapezoid_richardson

__all__ = [
    "AnnulusCheck",
    "boundary_functional",
    "boundary_limit",
    "check_annulus",
    "mass_balance_residual",
    "boundary_limit_deviation",
]


def _dim(dim, profile=None):
    if dim is None:
        return profile.dim
    dim = dim if isinstance(dim, Dimension) else Dimension(dim)
    if profile is not None and dim != profile.dim:
        raise DomainError("dimension does not match the profile")
    return dim


@dataclass(frozen=True)
class AnnulusCheck:
    eps: float
    R: float
    interior_integral: float
    boundary_outer: float
    boundary_inner: float
    residual: float

    @property
    def relative_residual(self):
        return abs(self.residual) / abs(self.interior_integral)


def boundary_functional(profile, alpha, r, dim=None):
    """Radial boundary term ``B(r)`` integrated over the sphere of radius ``r``."""
    dim = _dim(dim, profile)
    n = dim.n
    r = np.asarray(r, dtype=float)
    U = profile.U_at(r)
    rup = profile.rUprime_at(r)
    out = dim.sphere_area * (r ** (n * (alpha + 1)) * np.exp(U)
                             + (n - 1) / n * np.abs(rup) ** n)
    return out[()] if np.ndim(out) == 0 else out


def boundary_limit(gamma, dim):
    """Limit ``(n-1)/n (n w_n)^{-1/(n-1)} |gamma|^{n/(n-1)}`` of ``B`` at a log singularity."""
    dim = _dim(dim)
    n = dim.n
    return (n - 1) / n * dim.sphere_area ** (-1.0 / (n - 1)) * abs(gamma) ** (n / (n - 1.0))


def _interior(profile, alpha, eps, R, dim, panels):
    n = dim.n
    if alpha == profile.alpha:
        return n * (alpha + 1) * float(profile.mass_cum_at(R) - profile.mass_cum_at(eps))
    k = n * (alpha + 1)
    area = dim.sphere_area

    def g(s):
        return area * np.exp(k * s + profile.U_at(np.exp(s)))

    return n * (alpha + 1) * trapezoid_richardson(g, math.log(eps), math.log(R), panels)


def check_annulus(profile, alpha, eps, R, dim=None, panels=4096):
    """Both sides of the Pohozaev balance on ``eps < r < R`` and their difference.

    The interior integral reuses the profile's mass accumulator when
    ``alpha`` is the profile's own weight exponent and otherwise uses a
    log-grid trapezoid with one Richardson step. The input need not be a
    solution.
    """
    dim = _dim(dim, profile)
    if not 0 < eps < R:
        raise DomainError(f"need 0 < eps < R, got {eps}, {R}")
    if not (profile.contains(eps) and profile.contains(R)):
        raise DomainError("annulus must lie inside the profile grid")
    interior = _interior(profile, alpha, eps, R, dim, panels)
    outer = float(boundary_functional(profile, alpha, R, dim))
    inner = float(boundary_functional(profile, alpha, eps, dim))
    return AnnulusCheck(eps, R, interior, outer, inner, interior - (outer - inner))


def mass_balance_residual(gamma, gamma_inf, alpha, dim):
    """``n(a+1)(g + g_inf) - (n-1)/n (n w_n)^{-1/(n-1)} (|g_inf|^p - |g|^p)``, ``p = n/(n-1)``."""
    dim = _dim(dim)
    n = dim.n
    return n * (alpha + 1) * (gamma + gamma_inf) - (
        boundary_limit(gamma_inf, dim) - boundary_limit(gamma, dim))


def boundary_limit_deviation(profile, gamma, end, alpha=0.0):
    """Largest relative gap between ``B`` on the last decade at ``end`` and its limit."""
    s = profile.log_r
    ln10 = math.log(10.0)
    if end == "origin":
        mask = s <= s[0] + ln10 * (1 + 1e-12)
    elif end == "infinity":
        mask = s >= s[-1] - ln10 * (1 + 1e-12)
    else:
        raise DomainError(f"end must be 'origin' or 'infinity', got {end!r}")
    dim = profile.dim
    n = dim.n
    B = dim.sphere_area * (np.exp(n * (alpha + 1) * s[mask] + profile.U[mask])
                           + (n - 1) / n * np.abs(profile.rUprime[mask]) ** n)
    lim = boundary_limit(gamma, dim)
    return float(np.max(np.abs(B - lim)) / lim)
