"""Explicit solution families and the exact symmetries of the problem.

Three families are available:

``ENTIRE``
    ``u = log(c_n l^n / (1 + l^{n/(n-1)} r^{n/(n-1)})^n)``, the regular
    entire radial solution of ``-D_n u = e^u``. Its ground truth is the
    ``alpha = 0`` case of the singular radial family below; no independent
    formula for n >= 3 is used.
``SINGULAR``
    ``v = log(c_n (a+1)^n l^n / (1 + l^{n/(n-1)} r^{n(a+1)/(n-1)})^n)``,
    radial solutions of ``-D_n v = |x|^{n a} e^v`` for ``a > -1``.
``PLANAR``
    ``u = log(8 (a+1)^2 l^2 |x|^{2a} / (1 + l^2 |x^{a+1} + c|^2)^2)`` in the
    plane, solving ``-D u = e^u - 4 pi a delta_0``; ``c`` must vanish unless
    ``a`` is a nonnegative integer.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from nliouville.dimension import Dimension, c_n
from nliouville.errors import DomainError
from nliouville.profile import profile_from_function
from nliouville.quadrature import log_grid

__all__ = [
    "Family",
    "ClosedFormFamily",
    "eval_entire",
    "eval_singular_radial",
    "eval_planar",
    "radial_rUprime",
    "radial_mass_inside",
    "sample_profile",
    "radial_n_laplacian_residual",
    "planar_laplacian_residual",
    "planar_mass",
    "kelvin_transform",
    "rescale",
]


class Family(enum.Enum):
    ENTIRE = "entire"
    SINGULAR = "singular"
    PLANAR = "planar"


def _is_natural(a):
    return a >= 0 and float(a).is_integer()


@dataclass(frozen=True)
class ClosedFormFamily:
    kind: Family
    lam: float = 1.0
    alpha: float = 0.0
    c: complex = 0j
    dim: Dimension = field(default_factory=lambda: Dimension(2))

    def __post_init__(self):
        kind = Family(self.kind)
        object.__setattr__(self, "kind", kind)
        if not isinstance(self.dim, Dimension):
            object.__setattr__(self, "dim", Dimension(self.dim))
        object.__setattr__(self, "c", complex(self.c))
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError(f"lambda must be positive, got {self.lam}")
        if kind is Family.ENTIRE and self.alpha != 0:
            raise DomainError("the entire family has alpha = 0")
        if kind in (Family.SINGULAR, Family.PLANAR) and not self.alpha > -1:
            raise DomainError(f"alpha must exceed -1, got {self.alpha}")
        if kind is Family.PLANAR:
            if self.dim.n != 2:
                raise DomainError("the planar family lives in dimension 2")
            if self.c != 0 and not _is_natural(self.alpha):
                raise DomainError("c must be 0 unless alpha is a nonnegative integer")
        elif self.c != 0:
            raise DomainError("c only applies to the planar family")

    @property
    def radial(self):
        return self.kind is not Family.PLANAR or self.c == 0

    @property
    def weight_alpha(self):
        """Exponent of the weight |x|^{n a} in the equation this member solves."""
        return self.alpha if self.kind is Family.SINGULAR else 0.0


def _radial_parts(fam):
    """(log of the constant, radial exponent of r inside the log, power of the bracket)."""
    n = fam.dim.n
    a = fam.alpha
    if fam.kind is Family.PLANAR:
        return math.log(8.0 * (a + 1) ** 2 * fam.lam ** 2), 2.0 * a, 2.0, 2.0, 2.0 * (a + 1)
    q = n / (n - 1.0)
    a1 = a + 1.0 if fam.kind is Family.SINGULAR else 1.0
    log_const = math.log(c_n(fam.dim)) + n * math.log(a1) + n * math.log(fam.lam)
    # u = log_const + lead*log r - power*log(1 + l^qlam r^qr)
    return log_const, 0.0, float(n), q, q * a1


def _eval_radial(fam, r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    log_const, lead, power, qlam, qr = _radial_parts(fam)
    with np.errstate(divide="ignore"):
        log_r = np.log(r)
    if lead != 0.0 and np.any(r == 0):
        raise DomainError("the formula is singular at r = 0 for this alpha")
    log_x = qlam * math.log(fam.lam) + qr * log_r
    lead_term = lead * log_r if lead != 0.0 else 0.0
    out = log_const + lead_term - power * np.logaddexp(0.0, log_x)
    return out[()] if out.ndim == 0 else out


def radial_rUprime(fam, r):
    """Exact ``r U'(r)`` for a radial family member."""
    if not fam.radial:
        raise DomainError("rUprime is defined for radial members only")
    r = np.asarray(r, dtype=float)
    _, lead, power, qlam, qr = _radial_parts(fam)
    with np.errstate(divide="ignore"):
        log_x = qlam * math.log(fam.lam) + qr * np.log(r)
    out = lead - power * qr * expit(log_x)
    return out[()] if np.ndim(out) == 0 else out


def radial_mass_inside(fam, r):
    """Weighted mass of the ball of radius ``r`` for a radial member, exactly.

    Integrating the equation once gives
    ``n w_n (phi(s_0) - phi(r U'(r)))`` with ``phi(x) = |x|^{n-2} x`` and
    ``s_0`` the limit of ``r U'`` at the origin.
    """
    if not fam.radial:
        raise DomainError("the mass inside a ball is defined for radial members only")
    n = fam.dim.n
    lead = _radial_parts(fam)[1]
    rup = radial_rUprime(fam, r)

    def phi(x):
        return np.abs(x) ** (n - 2) * x

    out = fam.dim.sphere_area * (phi(lead) - phi(rup))
    return out[()] if np.ndim(out) == 0 else out


def eval_entire(fam, r):
    if fam.kind is not Family.ENTIRE:
        raise DomainError("eval_entire needs an ENTIRE family")
    return _eval_radial(fam, r)


def eval_singular_radial(fam, r):
    if fam.kind is not Family.SINGULAR:
        raise DomainError("eval_singular_radial needs a SINGULAR family")
    return _eval_radial(fam, r)


def _as_complex(x):
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return x
    if x.shape and x.shape[-1] == 2:
        return x[..., 0] + 1j * x[..., 1]
    return x.astype(complex)


def eval_planar(fam, x):
    """Value of the planar family at ``x`` (complex, or ``(..., 2)`` real pairs)."""
    if fam.kind is not Family.PLANAR:
        raise DomainError("eval_planar needs a PLANAR family")
    z = _as_complex(x)
    a = fam.alpha
    at_origin = z == 0
    if np.any(at_origin) and a != 0:
        raise DomainError("the planar family is singular at x = 0 when alpha != 0")
    if _is_natural(a):
        w = z ** int(a + 1)
    else:
        w = np.power(z, a + 1)  # principal branch; only |w| enters since c = 0
    with np.errstate(divide="ignore"):
        lead = 2.0 * a * np.log(np.abs(z)) if a != 0 else 0.0
    out = (math.log(8.0 * (a + 1) ** 2 * fam.lam ** 2) + lead
           - 2.0 * np.log1p(fam.lam ** 2 * np.abs(w + fam.c) ** 2))
    return out[()] if np.ndim(out) == 0 else out


def sample_profile(fam, r_min=1e-12, r_max=1e12, per_decade=40, log_r=None):
    """Radial profile of a family member on a log grid, masses by quadrature."""
    if not fam.radial:
        raise DomainError("only radial family members can be sampled as profiles")
    if log_r is None:
        log_r = log_grid(r_min, r_max, per_decade)
    dim = fam.dim
    return profile_from_function(
        lambda r: _eval_radial(fam, r),
        lambda r: radial_rUprime(fam, r),
        dim,
        log_r,
        alpha=fam.weight_alpha,
        meta={"family": fam.kind.value, "lambda": fam.lam, "alpha": fam.alpha},
    )


def radial_n_laplacian_residual(U, dim, alpha, r, h):
    """Residual ``-(r^{n-1}|U'|^{n-2}U')'/r^{n-1} - r^{n alpha} e^U`` by centered differences.

    ``U`` is a callable of the radius. The flux is evaluated at ``r +- h``
    with centered first differences, then differenced once more.
    """
    dim = dim if isinstance(dim, Dimension) else Dimension(dim)
    if not (r > 0 and h > 0):
        raise DomainError("r and h must be positive")
    if r - 2 * h <= 0:
        raise DomainError("need r - 2h > 0")
    n = dim.n

    def flux(rho):
        du = (U(rho + h) - U(rho - h)) / (2 * h)
        return rho ** (n - 1) * abs(du) ** (n - 2) * du

    div = (flux(r + h) - flux(r - h)) / (2 * h)
    return -div / r ** (n - 1) - r ** (n * alpha) * math.exp(U(r))


def planar_laplacian_residual(fam, x, h=1e-4):
    """Five-point residual ``-Lap u - e^u`` of the planar family at points ``x``."""
    z = _as_complex(x)
    c0 = eval_planar(fam, z)
    lap = (eval_planar(fam, z + h) + eval_planar(fam, z - h)
           + eval_planar(fam, z + 1j * h) + eval_planar(fam, z - 1j * h) - 4.0 * c0) / h ** 2
    return -lap - np.exp(c0)


def planar_mass(fam, r_min=1e-5, r_max=1e5, per_decade=100, n_theta=256):
    """Total mass ``int_{R^2} e^u`` of a planar member.

    Tensor trapezoid in ``(log r, theta)`` plus power-law tails: the
    integrand ``r^2 e^u`` behaves like ``r^{2a+2}`` at the origin and like
    ``r^{-(2a+2)}`` at infinity.
    """
    if fam.kind is not Family.PLANAR:
        raise DomainError("planar_mass needs a PLANAR family")
    a = fam.alpha
    s = log_grid(r_min, r_max, per_decade)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    r = np.exp(s)[:, None]
    z = r * np.exp(1j * theta)[None, :]
    w = z ** int(a + 1) if _is_natural(a) else np.power(z, a + 1)
    g = 8.0 * (a + 1) ** 2 * fam.lam ** 2 * r ** (2 * a + 2) / (
        1.0 + fam.lam ** 2 * np.abs(w + fam.c) ** 2) ** 2
    ring = g.mean(axis=1) * 2 * np.pi
    body = np.trapezoid(ring, s)
    kappa = 2.0 * a + 2.0
    return body + ring[0] / kappa + ring[-1] / kappa


def kelvin_transform(profile):
    """Profile of ``u(x / |x|^2)``, i.e. ``U(1/r)``, on the reflected grid.

    The weight exponent becomes ``-(alpha + 2)`` and ``mass_cum`` is the
    weighted mass of the transformed equation, so total masses agree and
    applying the map twice restores the input.
    """
    mc = profile.mass_cum
    return profile.with_arrays(
        log_r=-profile.log_r[::-1],
        U=profile.U[::-1],
        rUprime=-profile.rUprime[::-1],
        mass_cum=mc[-1] - mc[::-1],
        alpha=-(profile.alpha + 2.0),
    )


def rescale(profile, lam, dim=None):
    """Profile of ``U(lam x) + n (alpha + 1) log lam``; masses are unchanged."""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if dim is not None:
        dim = dim if isinstance(dim, Dimension) else Dimension(dim)
        if dim != profile.dim:
            raise DomainError("dimension does not match the profile")
    shift = math.log(lam)
    return profile.with_arrays(
        log_r=profile.log_r - shift,
        U=profile.U + profile.weight_exponent * shift,
    )
