"""Quantized masses of entire solutions and checks of measured masses against them."""

import math
from dataclasses import dataclass, field

from nliouville.dimension import Dimension, c_n
from nliouville.errors import DomainError, SolverError

__all__ = [
    "MassReport",
    "QuantizationVerdict",
    "mass_equation_root",
    "mass_equation_residual",
    "weighted_total_mass",
    "theorem3_mass",
    "alpha0_from_gamma",
    "gamma_from_alpha0",
    "verify_quantization",
    "bracketed_newton",
]


def _dim(dim):
    return dim if isinstance(dim, Dimension) else Dimension(dim)


def bracketed_newton(f, df, lo, hi, bisect_width=1e-3, max_iter=200):
    """Root of an increasing function on ``[lo, hi]``.

    Bisection shrinks the bracket to ``bisect_width`` (relative to ``max(1, |x|)``),
    then Newton polishes; any Newton iterate leaving the bracket is replaced
    by the midpoint. Requires ``f(lo) < 0 < f(hi)``.
    """
    flo, fhi = f(lo), f(hi)
    if not (flo < 0 < fhi):
        raise SolverError(f"root not bracketed: f({lo})={flo}, f({hi})={fhi}")
    it = 0
    while hi - lo > bisect_width * max(1.0, abs(lo)) and it < max_iter:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if fm < 0:
            lo = mid
        else:
            hi = mid
        it += 1
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = f(x)
        if fx == 0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        d = df(x)
        step = fx / d if d > 0 else math.inf
        xn = x - step
        if not lo <= xn <= hi:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 4 * 2.2e-16 * max(abs(x), 1e-300):
            return xn
        x = xn
    return x


def _mass_eq_coeffs(dim):
    n = dim.n
    k = (n - 1) / n * dim.sphere_area ** (-1.0 / (n - 1))
    return n, k, n / (n - 1.0)


def mass_equation_residual(gamma, gamma_inf, dim):
    """``k g_inf^p - n g_inf - (n g + k |g|^p)`` with ``k = (n-1)/n (n w_n)^{-1/(n-1)}``, ``p = n/(n-1)``."""
    n, k, p = _mass_eq_coeffs(_dim(dim))
    return k * abs(gamma_inf) ** p - n * gamma_inf - (n * gamma + k * abs(gamma) ** p)


def mass_equation_root(gamma, dim):
    """Mass at infinity of an entire solution with Dirac mass ``gamma`` at the origin.

    The unique root in ``(n^n w_n, inf)`` of :func:`mass_equation_residual`.
    As ``gamma -> -n^n w_n`` this root merges with the spurious root
    ``-gamma`` at the minimum of the left-hand side, so the attainable
    accuracy degrades to about ``sqrt(eps) * n^n w_n`` there.
    """
    dim = _dim(dim)
    n, k, p = _mass_eq_coeffs(dim)
    floor = n ** n * dim.omega_n
    if not (math.isfinite(gamma) and gamma > -floor):
        raise DomainError(f"gamma={gamma} violates gamma > -n^n w_n = {-floor}")
    rhs = n * gamma + k * abs(gamma) ** p

    def f(s):
        return k * s ** p - n * s - rhs

    def df(s):
        return k * p * s ** (p - 1) - n

    lo = floor * (1 + 1e-12)
    hi = floor + n * abs(gamma) + c_n(dim) * dim.omega_n + 10.0
    while f(hi) <= 0:
        hi *= 2.0
    if f(lo) >= 0:
        # gamma sits within rounding of the lower bound; the root is the bound itself
        return lo
    return bracketed_newton(f, df, lo, hi)


def weighted_total_mass(alpha, dim):
    """Total weighted mass ``n (n^2/(n-1))^{n-1} (a+1)^{n-1} w_n`` of solutions with weight |x|^{n a}."""
    dim = _dim(dim)
    if not alpha > -1:
        raise DomainError(f"alpha={alpha} violates alpha > -1")
    return c_n(dim) * (alpha + 1.0) ** (dim.n - 1) * dim.omega_n


# name used by the command-line contract
theorem3_mass = weighted_total_mass


def _peak_coeffs(dim):
    n = dim.n
    p = n / (n - 1.0)
    return dim.omega_n, (n - 1) / n * dim.omega_n * dim.sphere_area ** (-p), p


def alpha0_from_gamma(gamma, dim):
    """Peak value ``U(1)`` of the radial solution with Dirac mass ``gamma > 0``.

    ``log(g / w_n + (n-1)/n (g / (n w_n))^{n/(n-1)})``.
    """
    dim = _dim(dim)
    if not (gamma > 0 and math.isfinite(gamma)):
        raise DomainError(f"gamma must be positive, got {gamma}")
    n = dim.n
    return math.log(gamma / dim.omega_n
                    + (n - 1) / n * (gamma / dim.sphere_area) ** (n / (n - 1.0)))


def gamma_from_alpha0(alpha0, dim):
    """Inverse of :func:`alpha0_from_gamma`."""
    dim = _dim(dim)
    if not math.isfinite(alpha0):
        raise DomainError("alpha0 must be finite")
    w, cc, p = _peak_coeffs(dim)
    target = w * math.exp(alpha0)

    def f(g):
        return g + cc * g ** p - target

    def df(g):
        return 1.0 + cc * p * g ** (p - 1)

    lo = min(0.5 * target, (0.5 * target / cc) ** (1 / p))
    hi = target
    if f(hi) <= 0:
        hi *= 1 + 1e-12
    if f(lo) >= 0:
        lo *= 0.5
    return bracketed_newton(f, df, lo, hi, bisect_width=1e-6)


@dataclass
class MassReport:
    """Measured masses of a profile; ``eq921_residual`` is the raw mass-equation residual."""

    n: int
    omega_n: float
    gamma_num: float
    gamma_inf_num: float
    total_mass: float
    eq921_residual: float
    slope_origin: float
    slope_infinity: float
    uncertainties: dict = field(default_factory=dict)

    def to_json_dict(self, passed=None):
        return {
            "n": self.n,
            "omega_n": self.omega_n,
            "gamma_num": self.gamma_num,
            "gamma_inf_num": self.gamma_inf_num,
            "total_mass": self.total_mass,
            "eq921_residual": self.eq921_residual,
            "slope_origin": self.slope_origin,
            "slope_infinity": self.slope_infinity,
            "uncertainties": dict(self.uncertainties),
            "pass": passed,
        }


@dataclass
class QuantizationVerdict:
    gamma_target: float
    gamma_inf_expected: float
    tol: float
    checks: dict

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks.values())


def verify_quantization(report, gamma_target, dim, tol=1e-3):
    """Compare a :class:`MassReport` with the quantized values for ``gamma_target``.

    Checks (a) the origin mass, (b) the mass at infinity against
    :func:`mass_equation_root`, (c) ``total = gamma + gamma_inf``. Every
    check records its absolute residual and its threshold, which is ``tol``
    times the reference value (``tol`` itself for a zero origin mass).
    """
    dim = _dim(dim)
    g_inf = mass_equation_root(gamma_target, dim)
    checks = {}
    ra = abs(report.gamma_num - gamma_target)
    ta = tol * abs(gamma_target) if gamma_target else tol
    checks["gamma"] = {"residual": ra, "threshold": ta, "pass": bool(ra <= ta)}
    rb = abs(report.gamma_inf_num - g_inf)
    tb = tol * g_inf
    checks["gamma_inf"] = {"residual": rb, "threshold": tb, "pass": bool(rb <= tb)}
    rc = abs(report.total_mass - (report.gamma_num + report.gamma_inf_num))
    tc = tol * report.total_mass
    ok = math.isfinite(report.total_mass) and rc <= tc
    checks["total_mass"] = {"residual": rc, "threshold": tc, "pass": bool(ok)}
    return QuantizationVerdict(gamma_target, g_inf, tol, checks)
