"""Dimension-dependent constants and the slope/mass maps at a log singularity."""

import math
from dataclasses import dataclass, field

from nliouville.errors import DomainError

__all__ = [
    "Dimension",
    "SingularWeights",
    "ball_volume",
    "slope_to_gamma",
    "gamma_to_slope",
    "c_n",
    "critical_mass",
]


def ball_volume(n):
    """Volume of the unit ball in R^n, from w_1 = 2, w_2 = pi, w_n = 2 pi w_{n-2} / n."""
    if int(n) != n or n < 1:
        raise DomainError(f"ball_volume needs an integer n >= 1, got {n!r}")
    n = int(n)
    start = 1 if n % 2 else 2
    w = 2.0 if start == 1 else math.pi
    for k in range(start + 2, n + 1, 2):
        w *= 2.0 * math.pi / k
    return w


@dataclass(frozen=True)
class Dimension:
    """Ambient dimension ``n >= 2`` together with the unit-ball volume."""

    n: int
    omega_n: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"dimension must be an integer n >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "omega_n", ball_volume(self.n))

    @property
    def sphere_area(self):
        """Area of the unit sphere S^{n-1}, equal to n * omega_n."""
        return self.n * self.omega_n


def _as_dim(dim):
    return dim if isinstance(dim, Dimension) else Dimension(dim)


def slope_to_gamma(s, dim):
    """Dirac mass ``n w_n |s|^{n-2} s`` carried by a log singularity of slope ``s``."""
    dim = _as_dim(dim)
    n = dim.n
    return dim.sphere_area * math.copysign(abs(s) ** (n - 1), s) if s != 0 else 0.0


def gamma_to_slope(gamma, dim):
    """Slope ``sign(g) (|g| / (n w_n))^{1/(n-1)}``; inverse of :func:`slope_to_gamma`."""
    dim = _as_dim(dim)
    if gamma == 0:
        return 0.0
    return math.copysign((abs(gamma) / dim.sphere_area) ** (1.0 / (dim.n - 1)), gamma)


def c_n(dim):
    """The constant ``n (n^2/(n-1))^{n-1}`` of the radial entire family."""
    n = _as_dim(dim).n
    return n * (n * n / (n - 1)) ** (n - 1)


def critical_mass(alpha, dim):
    """Threshold ``n^n |a+1|^{n-2} (a+1) w_n`` for the weight exponent ``alpha``."""
    dim = _as_dim(dim)
    n = dim.n
    a1 = alpha + 1.0
    return n ** n * abs(a1) ** (n - 2) * a1 * dim.omega_n


@dataclass(frozen=True)
class SingularWeights:
    """Weight exponent ``alpha`` with the masses at the origin and at infinity.

    ``gamma`` must exceed ``-critical_mass(alpha)``; ``gamma_inf``, when set,
    must exceed ``+critical_mass(alpha)``.
    """

    alpha: float
    gamma: float
    dim: Dimension
    gamma_inf: float | None = None

    def __post_init__(self):
        bound = critical_mass(self.alpha, self.dim)
        if not self.gamma > -bound:
            raise DomainError(
                f"gamma={self.gamma} violates gamma > -n^n|a+1|^(n-2)(a+1)w_n = {-bound}"
            )
        if self.gamma_inf is not None and not self.gamma_inf > bound:
            raise DomainError(
                f"gamma_inf={self.gamma_inf} violates gamma_inf > n^n|a+1|^(n-2)(a+1)w_n = {bound}"
            )
