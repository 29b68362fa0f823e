"""Acceptance suites shared by ``nliouville verify`` and the test suite.

Each suite returns a list of :class:`Check` records. A regular check
passes when its residual is at most the threshold; a negative control
passes when the checker it exercises *rejects* a corrupted input, i.e.
when the residual exceeds the threshold. Random draws use fixed seeds so
repeated runs print identical tables.
"""

import math
import time
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from nliouville.closed_forms import (
    ClosedFormFamily,
    Family,
    eval_entire,
    kelvin_transform,
    planar_laplacian_residual,
    planar_mass,
    radial_rUprime,
    sample_profile,
)
from nliouville.dimension import Dimension, gamma_to_slope
from nliouville.pohozaev import (
    boundary_limit_deviation,
    check_annulus,
    mass_balance_residual,
)
from nliouville.profile import profile_from_function
from nliouville.quadrature import log_grid
from nliouville.quantization import (
    mass_equation_root,
    verify_quantization,
    weighted_total_mass,
)
from nliouville.radial_ode import (
    asymptotic_slope,
    mass_of,
    measure,
    picard_local_solve,
    solve_cauchy,
    solve_for_gamma,
)

__all__ = ["Check", "SUITES", "BUDGETS", "run_suite", "solved_cases", "clear_cache"]

GAMMAS = (0.5, math.pi, 8 * math.pi, 50.0)
DIMS = (2, 3, 4)
QUANT_TOL = 1e-3


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    value: float
    threshold: float
    passed: bool
    op: str = "<="

    @property
    def negative(self):
        return self.op == ">"

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return (f"[{tag}] {self.criterion} {self.name}: {self.value:.3e} "
                f"(want {self.op} {self.threshold:.1e})")


def _le(criterion, name, value, threshold):
    value = float(value)
    return Check(criterion, name, value, threshold, bool(value <= threshold))


def _lt(criterion, name, value, threshold):
    value = float(value)
    return Check(criterion, name, value, threshold, bool(value < threshold), "<")


def _gt(criterion, name, value, threshold):
    value = float(value)
    return Check(criterion, name, value, threshold, bool(value > threshold), ">")


def _rel(a, b):
    return abs(a - b) / abs(b)


def _cases(dims):
    for n in dims:
        for g in GAMMAS:
            if n == 4 and g == 0.5:
                continue
            yield n, g


@lru_cache(maxsize=None)
def _solved(n, gamma):
    prof = solve_for_gamma(gamma, Dimension(n))
    return prof, measure(prof)


def solved_cases(dims=DIMS):
    """``[(n, gamma, profile, report)]`` for the end-to-end quantization grid."""
    return [(n, g, *_solved(n, g)) for n, g in _cases(dims)]


def clear_cache():
    _solved.cache_clear()


def _gname(g):
    return {math.pi: "pi", 8 * math.pi: "8pi"}.get(g, f"{g:g}")


def mass8pi(dims=None):
    prof = sample_profile(ClosedFormFamily(Family.ENTIRE, dim=Dimension(2)))
    m = mass_of(prof, 0.0, math.inf)
    return [_le(1, "entire n=2 total mass vs 8pi", _rel(m, 8 * math.pi), 1e-6)]


def quantization(dims=None):
    out = []
    for n, g, _, rep in solved_cases(dims or DIMS):
        v = verify_quantization(rep, g, Dimension(n), tol=QUANT_TOL)
        tag = f"n={n} gamma={_gname(g)}"
        for key, label in (("gamma", "gamma"), ("gamma_inf", "gamma_inf"), ("total_mass", "total")):
            c = v.checks[key]
            scale = c["threshold"] / QUANT_TOL
            out.append(_le(2, f"{tag} {label}", c["residual"] / scale, QUANT_TOL))
    return out


def rootlaw(dims=None):
    gs = np.linspace(-4 * math.pi + 0.01, 100.0, 202)[1:-1]
    d2 = Dimension(2)
    err = max(abs(mass_equation_root(float(g), d2) - (g + 8 * math.pi)) for g in gs)
    return [_le(3, "n=2 root minus (gamma + 8pi), 200 values", err, 1e-10)]


def weighted_mass(dims=None):
    out = []
    for n in (2, 3):
        dim = Dimension(n)
        for a in (-0.5, 0.0, 1.0, 2.5):
            want = weighted_total_mass(a, dim)
            masses = []
            for lam in (0.5, 1.0, 3.0):
                fam = ClosedFormFamily(Family.SINGULAR, lam=lam, alpha=a, dim=dim)
                m = mass_of(sample_profile(fam), 0.0, math.inf)
                masses.append(m)
                out.append(_le(4, f"n={n} alpha={a:g} lambda={lam:g} mass", _rel(m, want), 1e-6))
            spread = (max(masses) - min(masses)) / want
            out.append(_le(4, f"n={n} alpha={a:g} lambda spread", spread, 1e-10))
    return out


def _pohozaev_families():
    fams = [ClosedFormFamily(Family.ENTIRE, dim=Dimension(n)) for n in DIMS]
    fams += [ClosedFormFamily(Family.SINGULAR, lam=0.5, alpha=a, dim=Dimension(n))
             for n in (2, 3) for a in (-0.5, 1.0, 2.5)]
    fams += [ClosedFormFamily(Family.PLANAR, alpha=a) for a in (0.5, 1.0)]
    return fams


def _fam_name(f):
    return f"{f.kind.value} n={f.dim.n} alpha={f.alpha:g} lambda={f.lam:g}"


def pohozaev(dims=None):
    rng = np.random.default_rng(339)
    out = []
    for fam in _pohozaev_families():
        prof = sample_profile(fam)
        worst = 0.0
        for _ in range(10):
            eps = 10 ** rng.uniform(-4, -1)
            R = 10 ** rng.uniform(0.5, 4)
            worst = max(worst, check_annulus(prof, fam.weight_alpha, eps, R).relative_residual)
        out.append(_le(5, f"{_fam_name(fam)} annulus residual (10 annuli)", worst, 1e-5))
    for n, g, prof, rep in solved_cases(dims or DIMS):
        tag = f"n={n} gamma={_gname(g)}"
        out.append(_le(5, f"{tag} boundary limit at origin",
                       boundary_limit_deviation(prof, rep.gamma_num, "origin"), 1e-3))
        out.append(_le(5, f"{tag} boundary limit at infinity",
                       boundary_limit_deviation(prof, rep.gamma_inf_num, "infinity"), 1e-3))
        bal = mass_balance_residual(rep.gamma_num, rep.gamma_inf_num, 0.0, Dimension(n))
        out.append(_le(5, f"{tag} mass balance", abs(bal) / (n * rep.total_mass), 1e-3))
    return out


def asymptotics(dims=None):
    out = []
    for n, g, prof, _ in solved_cases(dims or DIMS):
        dim = Dimension(n)
        tag = f"n={n} gamma={_gname(g)}"
        want0 = gamma_to_slope(g, dim)
        wanti = -gamma_to_slope(mass_equation_root(g, dim), dim)
        so = asymptotic_slope(prof, "origin").value
        si = asymptotic_slope(prof, "infinity").value
        out.append(_le(6, f"{tag} slope at origin", _rel(so, want0), 1e-3))
        out.append(_le(6, f"{tag} slope at infinity", _rel(si, wanti), 1e-3))
        kel = asymptotic_slope(kelvin_transform(prof), "origin").value
        out.append(_le(6, f"{tag} Kelvin origin slope vs -infinity slope",
                       abs(kel + si) / abs(si), 1e-12))
    return out


def picard(dims=None):
    rng = np.random.default_rng(1251)
    M = 2.0
    out = []
    for n in (2, 3):
        dim = Dimension(n)
        worst_q, worst_err = 0.0, 0.0
        for _ in range(50):
            r0 = rng.uniform(1 / M, M)
            a0 = rng.uniform(-M, M)
            a1 = rng.uniform(1 / M, M) * rng.choice((-1.0, 1.0))
            res = picard_local_solve(r0, a0, a1, dim, M=M)
            worst_q = max(worst_q, res.contraction_factor)
            idx = np.r_[0:res.r.size:64, res.r.size - 1]
            idx = idx[res.r[idx] != r0]
            U_rk, _ = solve_cauchy(r0, a0, a1, dim, res.r[idx])
            worst_err = max(worst_err, float(np.max(np.abs(res.U[idx] - U_rk))))
        out.append(_lt(7, f"n={n} worst contraction factor (50 draws)", worst_q, 1.0))
        out.append(_le(7, f"n={n} sup gap to RK solution (50 draws)", worst_err, 1e-8))
    return out


def planar(dims=None):
    rng = np.random.default_rng(1059)
    fam = ClosedFormFamily(Family.PLANAR, lam=1.0, alpha=1.0, c=1.0)
    rad = rng.uniform(0.2, 3.0, 50)
    ang = rng.uniform(0, 2 * np.pi, 50)
    res = planar_laplacian_residual(fam, rad * np.exp(1j * ang))
    out = [_le(8, "alpha=1 c=1 FD residual (50 points)", np.max(np.abs(res)), 1e-4)]
    for a in (1.0, 2.0):
        for c in (0.0, 1.0):
            m = planar_mass(ClosedFormFamily(Family.PLANAR, alpha=a, c=c))
            out.append(_le(8, f"alpha={a:g} c={c:g} mass vs 8pi(alpha+1)",
                           _rel(m, 8 * math.pi * (a + 1)), 1e-3))
    return out


def negative(dims=None):
    out = []
    d2 = Dimension(2)
    _, rep = _solved(2, 8 * math.pi)

    bad = replace(rep, total_mass=0.5 * rep.total_mass)
    c = verify_quantization(bad, 8 * math.pi, d2).checks["total_mass"]
    out.append(_gt(9, "halved total mass rejected by quantization check",
                   c["residual"], c["threshold"]))

    c = verify_quantization(rep, math.pi, d2).checks["gamma"]
    out.append(_gt(9, "wrong gamma target rejected", c["residual"], c["threshold"]))

    bal = mass_balance_residual(rep.gamma_num, rep.gamma_num + 8 * math.pi + 1.0, 0.0, d2)
    out.append(_gt(9, "mass balance with gamma_inf off by 1", abs(bal) / (2 * rep.total_mass), 1e-3))

    fam = ClosedFormFamily(Family.ENTIRE, dim=d2)
    def bump(r):
        return 0.05 * np.exp(-np.log(r) ** 2)

    def bump_r(r):
        return -0.1 * np.log(r) * np.exp(-np.log(r) ** 2)

    perturbed = profile_from_function(lambda r: eval_entire(fam, r) + bump(r),
                                      lambda r: radial_rUprime(fam, r) + bump_r(r), d2,
                                      log_grid(1e-12, 1e12, 40))
    worst = min(check_annulus(perturbed, 0.0, eps, R).relative_residual
                for eps, R in ((1e-3, 1e2), (1e-2, 10.0), (0.1, 1e3)))
    out.append(_gt(9, "perturbed entire profile fails Pohozaev (best of 3 annuli)", worst, 1e-5))

    gauss = profile_from_function(lambda r: -0.5 * r ** 2, lambda r: -(r ** 2), d2,
                                  log_grid(1e-6, 1e2, 40))
    worst = check_annulus(gauss, 0.0, 1e-3, 5.0).relative_residual
    out.append(_gt(9, "U = -r^2/2 fails Pohozaev", worst, 1e-5))

    prof, _ = _solved(2, math.pi)
    shifted = prof.with_arrays(rUprime=prof.rUprime + 0.01)
    so = asymptotic_slope(shifted, "origin").value
    out.append(_gt(9, "shifted rU' fails origin slope check",
                   _rel(so, gamma_to_slope(math.pi, d2)), 1e-3))
    return out


SUITES = {
    "mass8pi": mass8pi,
    "quantization": quantization,
    "rootlaw": rootlaw,
    "weighted-mass": weighted_mass,
    "pohozaev": pohozaev,
    "asymptotics": asymptotics,
    "picard": picard,
    "planar": planar,
    "negative": negative,
}

# wall-clock budgets in seconds, per suite
BUDGETS = {
    "mass8pi": 1.0,
    "quantization": 30.0,
    "rootlaw": 1.0,
    "weighted-mass": 5.0,
    "pohozaev": 10.0,
    "picard": 10.0,
    "planar": 30.0,
}


def run_suite(name, dims=None):
    """Run one suite; returns ``(checks, seconds)``."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    t = time.perf_counter()
    checks = SUITES[name](dims)
    return checks, time.perf_counter() - t
