"""Radial solutions of ``-D_n U = e^U`` on ``(0, inf)`` and their masses.

The ODE is integrated in flux form. With ``s = log r`` and the flux
``F = r^{n-1} |U'|^{n-2} U'`` the system is::

    dU/ds = sign(F) |F|^{1/(n-1)}     (this is r U')
    dF/ds = -r^n e^U
    dM/ds = +r^n e^U                  (M = int_{r_0}^r t^{n-1} e^U dt)

so ``F + M`` is conserved exactly by any Runge-Kutta scheme. At a peak
``F = 0`` and the right-hand side is not Lipschitz for ``n > 2``; the
first step away from the peak uses the local expansion instead.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from nliouville import integrator
from nliouville.dimension import Dimension, gamma_to_slope, slope_to_gamma
from nliouville.errors import DomainError, InsufficientSpanError, SolverError
from nliouville.profile import RadialProfile
from nliouville.quadrature import cumulative_simpson, log_grid, power_tail
from nliouville.quantization import (
    MassReport,
    alpha0_from_gamma,
    mass_equation_residual,
)

__all__ = [
    "OdeState",
    "SolveConfig",
    "SlopeEstimate",
    "PicardResult",
    "solve_from_peak",
    "solve_for_gamma",
    "solve_cauchy",
    "picard_delta",
    "picard_constant",
    "picard_local_solve",
    "mass_of",
    "asymptotic_slope",
    "measure",
]

ALPHA0_MAX = 700.0
LN10 = math.log(10.0)


def _dim(dim):
    return dim if isinstance(dim, Dimension) else Dimension(dim)


@dataclass(frozen=True)
class OdeState:
    """Integrator state at radius ``r``; ``U'`` is recovered from ``(r, F)``."""

    r: float
    U: float
    F: float
    M: float
    n: int

    @property
    def rUprime(self):
        return math.copysign(abs(self.F) ** (1.0 / (self.n - 1)), self.F) if self.F else 0.0

    @property
    def Uprime(self):
        return self.rUprime / self.r


@dataclass(frozen=True)
class SolveConfig:
    r_min: float = 1e-8
    r_max: float = 1e8
    rel_tol: float = 1e-11
    abs_tol: float = 1e-14
    max_steps: int = 200_000
    per_decade: int = 50
    bootstrap_step: float = 1e-6

    def __post_init__(self):
        if not 0 < self.r_min < 1 < self.r_max:
            raise DomainError(f"need 0 < r_min < 1 < r_max, got {self.r_min}, {self.r_max}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_steps < 1 or self.per_decade < 1:
            raise DomainError("max_steps and per_decade must be positive")
        spacing = LN10 / self.per_decade
        if not 0 < self.bootstrap_step < 0.5 * spacing:
            raise DomainError("bootstrap_step must be positive and below half the grid spacing")


def _run(n, s0, y0, s_out, cfg, backend):
    fn = integrator.integrate_flux if backend is None else integrator.get_backend(backend)
    Y, nsteps, status, s_last = fn(n, s0, y0, s_out, cfg.rel_tol, cfg.abs_tol,
                                   cfg.bootstrap_step, cfg.max_steps)
    if status == integrator.STATUS_MAX_STEPS:
        raise SolverError(f"step budget of {cfg.max_steps} exhausted", last_r=math.exp(s_last))
    if status == integrator.STATUS_NONFINITE:
        raise SolverError("state became non-finite", last_r=math.exp(s_last))
    if status == integrator.STATUS_STEP_UNDERFLOW:
        raise SolverError("step size underflow", last_r=math.exp(s_last))
    return Y, nsteps


def _flux_to_rup(F, n):
    return np.sign(F) * np.abs(F) ** (1.0 / (n - 1))


def peak_expansion(alpha0, n, r):
    """Leading-order state ``(U, F, M)`` near a peak ``U(1) = alpha0, U'(1) = 0``."""
    e0 = math.exp(alpha0)
    F = -e0 * (r ** n - 1.0) / n
    p = n / (n - 1.0)
    U = alpha0 - math.exp(alpha0 / (n - 1)) * abs(r - 1.0) ** p / p
    return U, F, -F


def solve_from_peak(alpha0, dim, cfg=None, backend=None):
    """Radial solution with ``U(1) = alpha0`` and ``U'(1) = 0`` on ``[r_min, r_max]``.

    Returns a :class:`RadialProfile` on a log grid containing ``r = 1``.
    ``backend`` selects the stepper ('cython' or 'python'); default is
    the one chosen at import.
    """
    dim = _dim(dim)
    cfg = cfg or SolveConfig()
    if not math.isfinite(alpha0):
        raise DomainError("alpha0 must be finite")
    if alpha0 > ALPHA0_MAX:
        raise DomainError(f"alpha0={alpha0} exceeds {ALPHA0_MAX}; e^alpha0 would overflow")
    n = dim.n
    s = log_grid(cfg.r_min, cfg.r_max, cfg.per_decade, include=1.0)
    i0 = int(np.flatnonzero(s == 0.0)[0])
    h0 = cfg.bootstrap_step

    out_y = peak_expansion(alpha0, n, math.exp(h0))
    in_y = peak_expansion(alpha0, n, math.exp(-h0))
    Yo, no = _run(n, h0, out_y, s[i0 + 1:], cfg, backend)
    Yi, ni = _run(n, -h0, in_y, s[:i0][::-1], cfg, backend)
    Y = np.vstack([Yi[::-1], [[alpha0, 0.0, 0.0]], Yo])

    U, F, M = Y[:, 0], Y[:, 1], Y[:, 2]
    return RadialProfile(
        dim=dim,
        log_r=s,
        U=U,
        rUprime=_flux_to_rup(F, n),
        mass_cum=dim.sphere_area * (M - M[0]),
        alpha=0.0,
        tol=cfg.rel_tol,
        meta={"alpha0": alpha0, "steps": no + ni, "peak_index": i0,
              "backend": backend or integrator.BACKEND},
    )


def solve_for_gamma(gamma, dim, cfg=None, backend=None):
    """Radial solution with Dirac mass ``gamma > 0`` at the origin, peak at ``r = 1``."""
    dim = _dim(dim)
    prof = solve_from_peak(alpha0_from_gamma(gamma, dim), dim, cfg, backend)
    prof.meta["gamma"] = gamma
    return prof


def solve_cauchy(r0, alpha0, alpha1, dim, r_out, rel_tol=1e-12, abs_tol=1e-15,
                 max_steps=200_000, backend=None):
    """Solve ``U(r0) = alpha0``, ``U'(r0) = alpha1 != 0`` and sample at ``r_out``.

    Returns ``(U, rUprime)`` arrays aligned with ``r_out``.
    """
    dim = _dim(dim)
    n = dim.n
    if not (r0 > 0 and alpha1 != 0 and math.isfinite(alpha0) and math.isfinite(alpha1)):
        raise DomainError("need r0 > 0, finite alpha0 and nonzero finite alpha1")
    r_out = np.asarray(r_out, dtype=float)
    if np.any(r_out <= 0):
        raise DomainError("output radii must be positive")
    cfg = SolveConfig(rel_tol=rel_tol, abs_tol=abs_tol, max_steps=max_steps,
                      bootstrap_step=1e-4, per_decade=10)
    s0 = math.log(r0)
    F0 = r0 ** (n - 1) * abs(alpha1) ** (n - 2) * alpha1
    y0 = (alpha0, F0, 0.0)
    s_out = np.log(r_out)
    order = np.argsort(s_out, kind="stable")
    U = np.empty_like(s_out)
    F = np.empty_like(s_out)
    right = order[s_out[order] >= s0]
    left = order[s_out[order] < s0][::-1]
    for idx in (right, left):
        if idx.size:
            Y, _ = _run(n, s0, y0, s_out[idx], cfg, backend)
            U[idx] = Y[:, 0]
            F[idx] = Y[:, 1]
    return U, _flux_to_rup(F, n)


def picard_constant(M, dim):
    """Lipschitz constant ``(1 + (n-2)/(n-1)) (4 M^{2n-2})^{(n-2)/(n-1)}`` of ``x -> |x|^{-(n-2)/(n-1)} x``."""
    n = _dim(dim).n
    e = (n - 2) / (n - 1)
    return (1 + e) * (4 * M ** (2 * n - 2)) ** e


def picard_delta(M, dim, safety=0.9):
    """Half-width of an interval on which the Picard operator contracts.

    ``safety`` times the smallest of ``1/(2M)``, ``1/(3M^3)``,
    ``e^{-M-1}/(2(M+1)^{3n-3})`` and ``e^{-M-1}/(2 C_M (M+1)^n)``.
    """
    dim = _dim(dim)
    if not M > 1:
        raise DomainError("M must exceed 1")
    if not 0 < safety < 1:
        raise DomainError("safety must lie in (0, 1)")
    n = dim.n
    em = math.exp(-M - 1)
    bounds = (
        1 / (2 * M),
        1 / (3 * M ** 3),
        em / (2 * (M + 1) ** (3 * n - 3)),
        em / (2 * picard_constant(M, dim) * (M + 1) ** n),
    )
    return safety * min(bounds)


@dataclass
class PicardResult:
    r: np.ndarray
    U: np.ndarray
    delta: float
    iterations: int
    diffs: list
    ratios: list
    contraction_factor: float
    theoretical_factor: float
    converged: bool


def _integrate_from_center(y, c, h):
    """Signed ``int_{r_c}^{r_i} y`` on a uniform grid centered at index ``c``."""
    out = np.empty_like(y)
    out[c:] = cumulative_simpson(y[c:], h)
    out[:c + 1] = -cumulative_simpson(y[c::-1], h)[::-1]
    return out


def picard_local_solve(r0, alpha0, alpha1, dim, iters=30, M=2.0, panels=4096, safety=0.9):
    """Fixed point of the integral operator of the Cauchy problem near ``r0``.

    ``T U(r) = alpha0 + int_{r0}^r sign(G)|G|^{1/(n-1)} ds / s`` with
    ``G(s) = r0^{n-1}|alpha1|^{n-2} alpha1 - int_{r0}^s t^{n-1} e^{U(t)} dt``,
    iterated from ``U = alpha0`` on ``[r0 - delta, r0 + delta]`` with nested
    composite Simpson quadrature over ``panels`` panels. Iteration stops
    after ``iters`` sweeps or once successive iterates agree to rounding.
    Raises :class:`SolverError` if an observed contraction ratio reaches 1.
    """
    dim = _dim(dim)
    n = dim.n
    if not M > 1:
        raise DomainError("M must exceed 1")
    if not (1 / M <= r0 <= M and alpha0 <= M and 1 / M <= abs(alpha1) <= M):
        raise DomainError(
            f"(r0, alpha0, alpha1)=({r0}, {alpha0}, {alpha1}) outside the box "
            f"1/M <= r0 <= M, alpha0 <= M, 1/M <= |alpha1| <= M with M={M}"
        )
    if panels % 2 or panels < 4:
        raise DomainError("panels must be an even number >= 4")
    delta = picard_delta(M, dim, safety)
    c = panels // 2
    r = r0 + delta * np.linspace(-1.0, 1.0, panels + 1)
    r[c] = r0
    h = 2 * delta / panels
    F0 = r0 ** (n - 1) * abs(alpha1) ** (n - 2) * alpha1
    rn1 = r ** (n - 1)
    inv = 1.0 / (n - 1)

    def T(U):
        G = F0 - _integrate_from_center(rn1 * np.exp(U), c, h)
        phi = np.sign(G) * np.abs(G) ** inv / r
        return alpha0 + _integrate_from_center(phi, c, h)

    U = np.full_like(r, alpha0)
    diffs, ratios = [], []
    floor = 1e3 * np.finfo(float).eps * max(1.0, abs(alpha0) + 1.0)
    converged = False
    k = 0
    for k in range(1, iters + 1):
        Un = T(U)
        d = float(np.max(np.abs(Un - U)))
        if diffs and diffs[-1] > floor:
            ratios.append(d / diffs[-1])
        diffs.append(d)
        U = Un
        if d <= floor:
            converged = True
            break
    q = max(ratios) if ratios else 0.0
    theory = 2 * picard_constant(M, dim) * (M + 1) ** n * math.exp(M + 1) * delta
    res = PicardResult(r=r, U=U, delta=delta, iterations=k, diffs=diffs, ratios=ratios,
                       contraction_factor=q, theoretical_factor=theory, converged=converged)
    if q >= 1.0:
        raise SolverError(f"Picard iterates failed to contract (ratio {q:.3g})", last_r=r0)
    return res


@dataclass(frozen=True)
class SlopeEstimate:
    value: float
    uncertainty: float
    fit_deviation: float
    end: str
    samples: int = field(default=0)


def _require_span(profile, decades=2.0):
    span = profile.log_r[-1] - profile.log_r[0]
    if span < decades * LN10 * (1 - 1e-12):
        raise InsufficientSpanError(
            f"profile spans {span / LN10:.3g} decades; need at least {decades}")


def asymptotic_slope(profile, end):
    """Limit of ``r U'`` at ``end`` ('origin' or 'infinity').

    Least-squares constant (the mean) of ``r U'`` over the last decade of
    the grid at that end. The uncertainty is the largest deviation from
    the mean plus an integrator allowance of ``100 * tol * max(1, |slope|)``.
    """
    _require_span(profile)
    s = profile.log_r
    if end == "origin":
        mask = s <= s[0] + LN10 * (1 + 1e-12)
    elif end == "infinity":
        mask = s >= s[-1] - LN10 * (1 + 1e-12)
    else:
        raise DomainError(f"end must be 'origin' or 'infinity', got {end!r}")
    vals = profile.rUprime[mask]
    mean = float(np.mean(vals))
    dev = float(np.max(np.abs(vals - mean)))
    allowance = 100.0 * max(profile.tol, 1e-14) * max(1.0, abs(mean))
    return SlopeEstimate(mean, dev + allowance, dev, end, int(vals.size))


def _tail(profile, end, slope=None):
    if slope is None:
        slope = asymptotic_slope(profile, end).value
    i = 0 if end == "origin" else -1
    g_end = float(profile.density()[i])
    return power_tail(g_end, profile.weight_exponent + slope, end)


def mass_of(profile, from_r, to_r):
    """Weighted mass ``n w_n int t^{n-1+n alpha} e^U dt`` over ``[from_r, to_r]``.

    ``from_r = 0`` and ``to_r = inf`` add the power-law tails beyond the grid.
    """
    if not from_r <= to_r:
        raise DomainError(f"empty or reversed interval [{from_r}, {to_r}]")
    if from_r == to_r:
        return 0.0
    head = 0.0
    if from_r == 0:
        head = _tail(profile, "origin")
        lo = float(profile.mass_cum[0])
    else:
        lo = float(profile.mass_cum_at(from_r))
    tail = 0.0
    if math.isinf(to_r):
        tail = _tail(profile, "infinity")
        hi = float(profile.mass_cum[-1])
    else:
        hi = float(profile.mass_cum_at(to_r))
    return head + (hi - lo) + tail


def measure(profile):
    """Masses at the origin and at infinity, total mass and mass-equation residual.

    ``uncertainties`` holds one entry per measured quantity; the gap
    ``|total - (gamma + gamma_inf)|`` is covered by the sum of the
    ``total_mass``, ``gamma_num`` and ``gamma_inf_num`` entries.
    """
    if not (profile.log_r[0] <= -2 * LN10 * (1 - 1e-12)
            and profile.log_r[-1] >= 2 * LN10 * (1 - 1e-12)):
        raise InsufficientSpanError("measure needs at least two decades on each side of r = 1")
    dim = profile.dim
    n = dim.n
    so = asymptotic_slope(profile, "origin")
    si = asymptotic_slope(profile, "infinity")
    gamma = slope_to_gamma(so.value, dim)
    gamma_inf = slope_to_gamma(-si.value, dim)

    t0 = _tail(profile, "origin", so.value)
    t1 = _tail(profile, "infinity", si.value)
    body = float(profile.mass_cum[-1] - profile.mass_cum[0])
    total = body + t0 + t1

    def dgamma(slope, du):
        return dim.sphere_area * (n - 1) * abs(slope) ** (n - 2) * du

    k0 = profile.weight_exponent + so.value
    k1 = profile.weight_exponent + si.value
    tail_unc = 0.0
    if math.isfinite(total):
        tail_unc = t0 * so.uncertainty / abs(k0) + t1 * si.uncertainty / abs(k1)
    unc = {
        "slope_origin": so.uncertainty,
        "slope_infinity": si.uncertainty,
        "gamma_num": dgamma(so.value, so.uncertainty),
        "gamma_inf_num": dgamma(si.value, si.uncertainty),
        "total_mass": tail_unc + 100.0 * max(profile.tol, 1e-14) * abs(total),
    }
    return MassReport(
        n=n,
        omega_n=dim.omega_n,
        gamma_num=gamma,
        gamma_inf_num=gamma_inf,
        total_mass=total,
        eq921_residual=mass_equation_residual(gamma, gamma_inf, dim),
        slope_origin=so.value,
        slope_infinity=si.value,
        uncertainties=unc,
    )


def expected_slopes(gamma, gamma_inf, dim):
    """Slopes ``(origin, infinity)`` implied by the two masses."""
    return gamma_to_slope(gamma, dim), -gamma_to_slope(gamma_inf, dim)
