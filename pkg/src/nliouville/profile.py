"""Sampled radial profiles and their CSV representation."""

import csv
import io
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from nliouville.dimension import Dimension
from nliouville.errors import DomainError
from nliouville.quadrature import gauss_cumulative

__all__ = [
    "RadialProfile",
    "profile_from_function",
    "write_profile_csv",
    "read_profile_csv",
    "CSV_HEADER",
]

CSV_HEADER = ("r", "U", "rUprime", "mass_cum")


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A radial function sampled on a log grid.

    The grid is stored as ``log_r`` so that inversion ``r -> 1/r`` and
    rescaling are exact. ``mass_cum[i]`` is the weighted mass
    ``n w_n int_{r_0}^{r_i} t^{n-1+n*alpha} e^{U(t)} dt`` from the inner end,
    where ``alpha`` is the weight exponent of the equation the profile is
    meant to solve (0 for the unweighted equation). ``tol`` records the
    relative tolerance of whatever produced the samples (0 for closed forms).
    """

    dim: Dimension
    log_r: np.ndarray
    U: np.ndarray
    rUprime: np.ndarray
    mass_cum: np.ndarray
    alpha: float = 0.0
    tol: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arrays = {}
        for name in ("log_r", "U", "rUprime", "mass_cum"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            arrays[name] = a
            object.__setattr__(self, name, a)
        m = arrays["log_r"].shape[0]
        if m < 2 or any(a.shape != (m,) for a in arrays.values()):
            raise DomainError("profile arrays must be 1-D, equal length, at least 2 samples")
        if not np.all(np.diff(arrays["log_r"]) > 0):
            raise DomainError("profile grid must be strictly increasing")

    @property
    def grid(self):
        return np.exp(self.log_r)

    @property
    def weight_exponent(self):
        """Power ``k`` in the mass density ``r^k e^U`` per unit ``log r``."""
        return self.dim.n * (self.alpha + 1.0)

    def __len__(self):
        return self.log_r.shape[0]

    def density(self, s=None, U=None):
        """Mass density per unit ``log r``: ``n w_n r^{n(alpha+1)} e^U``."""
        if s is None:
            s, U = self.log_r, self.U
        return self.dim.sphere_area * np.exp(self.weight_exponent * s + U)

    def contains(self, r):
        if r <= 0:
            return False
        s = math.log(r)
        return self.log_r[0] - 1e-12 <= s <= self.log_r[-1] + 1e-12

    def _check(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise DomainError("radius must be positive")
        s = np.log(r)
        lo, hi = self.log_r[0], self.log_r[-1]
        tol = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(s < lo - tol) or np.any(s > hi + tol):
            raise DomainError(f"radius outside the profile grid [{math.exp(lo)}, {math.exp(hi)}]")
        return np.clip(s, lo, hi)

    @cached_property
    def _u_interp(self):
        return CubicHermiteSpline(self.log_r, self.U, self.rUprime)

    @cached_property
    def _rup_interp(self):
        return CubicSpline(self.log_r, self.rUprime)

    @cached_property
    def _mass_interp(self):
        return CubicHermiteSpline(self.log_r, self.mass_cum, self.density())

    def U_at(self, r):
        """Value of U at radius ``r`` (Hermite interpolation in ``log r``)."""
        return self._u_interp(self._check(r))

    def rUprime_at(self, r):
        return self._rup_interp(self._check(r))

    def mass_cum_at(self, r):
        return self._mass_interp(self._check(r))

    def with_arrays(self, **changes):
        """Copy with some arrays or attributes replaced."""
        kw = dict(dim=self.dim, log_r=self.log_r, U=self.U, rUprime=self.rUprime,
                  mass_cum=self.mass_cum, alpha=self.alpha, tol=self.tol, meta=dict(self.meta))
        kw.update(changes)
        return RadialProfile(**kw)


def profile_from_function(U, rUprime, dim, log_r, alpha=0.0, order=8, meta=None):
    """Sample a radial function given as callables of ``r``.

    ``mass_cum`` is computed by Gauss-Legendre quadrature of the weighted
    density between consecutive grid nodes, so it is accurate to rounding
    for smooth ``U`` even on coarse grids.
    """
    dim = dim if isinstance(dim, Dimension) else Dimension(dim)
    log_r = np.asarray(log_r, dtype=float)
    r = np.exp(log_r)
    k = dim.n * (alpha + 1.0)
    area = dim.sphere_area

    def g(s):
        return area * np.exp(k * s + U(np.exp(s)))

    mass = gauss_cumulative(g, log_r, order=order)
    return RadialProfile(dim=dim, log_r=log_r, U=U(r), rUprime=rUprime(r),
                         mass_cum=mass, alpha=alpha, meta=dict(meta or {}))


def _fmt(x):
    return format(float(x), ".17g")


def write_profile_csv(profile, path_or_file):
    """Write ``r,U,rUprime,mass_cum`` rows (17 significant digits, increasing r)."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in zip(profile.grid, profile.U, profile.rUprime, profile.mass_cum):
            w.writerow([_fmt(v) for v in row])
    finally:
        if own:
            fh.close()


def read_profile_csv(path_or_text, dim, alpha=0.0):
    """Read a profile written by :func:`write_profile_csv`."""
    if isinstance(path_or_text, str) and "\n" in path_or_text:
        fh = io.StringIO(path_or_text)
        rows = list(csv.reader(fh))
    else:
        with open(path_or_text, newline="") as fh:
            rows = list(csv.reader(fh))
    if tuple(rows[0]) != CSV_HEADER:
        raise DomainError(f"unexpected CSV header {rows[0]!r}")
    data = np.array(rows[1:], dtype=float)
    dim = dim if isinstance(dim, Dimension) else Dimension(dim)
    return RadialProfile(dim=dim, log_r=np.log(data[:, 0]), U=data[:, 1],
                         rUprime=data[:, 2], mass_cum=data[:, 3], alpha=alpha)
