import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nliouville.closed_forms import (
    ClosedFormFamily,
    Family,
    eval_planar,
    sample_profile,
)
from nliouville.dimension import Dimension, gamma_to_slope
from nliouville.errors import DomainError, InsufficientSpanError
from nliouville.quantization import alpha0_from_gamma, mass_equation_root
from nliouville.radial_ode import (
    OdeState,
    SolveConfig,
    asymptotic_slope,
    expected_slopes,
    mass_of,
    measure,
    peak_expansion,
    solve_cauchy,
    solve_for_gamma,
    solve_from_peak,
)


def plane_oracle(gamma):
    """Radial solution in R^2 with Dirac mass gamma and peak at r = 1, in closed form."""
    a = gamma / (4 * math.pi)
    return ClosedFormFamily(Family.PLANAR, alpha=a, lam=math.sqrt(a / (a + 2)))


@pytest.mark.parametrize("gamma", [0.5, math.pi, 8 * math.pi, 50.0])
def test_plane_solution_matches_closed_form(gamma):
    p = solve_for_gamma(gamma, Dimension(2))
    fam = plane_oracle(gamma)
    np.testing.assert_allclose(p.U, eval_planar(fam, p.grid + 0j), rtol=0, atol=1e-8)
    assert p.U[p.meta["peak_index"]] == alpha0_from_gamma(gamma, 2)


def test_peak_value_in_the_plane():
    # U(1) of the closed form is log(2 a (a + 2)) with a = gamma / (4 pi)
    for g in (0.1, 3.0, 40.0):
        a = g / (4 * math.pi)
        assert alpha0_from_gamma(g, 2) == pytest.approx(math.log(2 * a * (a + 2)), rel=1e-14)


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("gamma", [math.pi, 50.0])
def test_solution_satisfies_the_ode(n, gamma):
    # second-order check independent of the flux form: differentiate the sampled rU'
    p = solve_for_gamma(gamma, Dimension(n), SolveConfig(per_decade=400, r_min=1e-3, r_max=1e3))
    s, rup = p.log_r, p.rUprime
    flux = np.abs(rup) ** (n - 2) * rup
    dflux = np.gradient(flux, s)
    rhs = -np.exp(n * s + p.U)
    inner = slice(5, -5)
    scale = np.max(np.abs(rhs))
    assert np.max(np.abs(dflux[inner] - rhs[inner])) < 1e-3 * scale


def test_peak_is_a_maximum(dim):
    p = solve_for_gamma(5.0, dim)
    i = p.meta["peak_index"]
    assert p.log_r[i] == 0.0 and p.rUprime[i] == 0.0
    assert np.all(p.U <= p.U[i])
    assert np.all(p.rUprime[:i] > 0) and np.all(p.rUprime[i + 1:] < 0)


def test_measure_recovers_masses(dim):
    for g in (1.0, 30.0):
        rep = measure(solve_for_gamma(g, dim))
        assert rep.gamma_num == pytest.approx(g, rel=1e-8)
        assert rep.gamma_inf_num == pytest.approx(mass_equation_root(g, dim), rel=1e-8)
        assert rep.total_mass == pytest.approx(rep.gamma_num + rep.gamma_inf_num, rel=1e-8)
        so, si = expected_slopes(rep.gamma_num, rep.gamma_inf_num, dim)
        assert rep.slope_origin == pytest.approx(so, rel=1e-12)
        assert rep.slope_infinity == pytest.approx(si, rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.floats(0.3, 80.0))
def test_total_mass_gap_within_reported_uncertainty(n, gamma):
    rep = measure(solve_for_gamma(gamma, Dimension(n)))
    u = rep.uncertainties
    gap = abs(rep.total_mass - (rep.gamma_num + rep.gamma_inf_num))
    assert gap <= u["total_mass"] + u["gamma_num"] + u["gamma_inf_num"]


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3]), st.floats(0.3, 60.0))
def test_halving_tolerance_stays_within_uncertainty(n, gamma):
    d = Dimension(n)
    a = measure(solve_for_gamma(gamma, d, SolveConfig(rel_tol=1e-10, abs_tol=1e-13)))
    b = measure(solve_for_gamma(gamma, d, SolveConfig(rel_tol=5e-11, abs_tol=5e-14)))
    assert abs(a.gamma_num - b.gamma_num) <= a.uncertainties["gamma_num"]
    assert abs(a.gamma_inf_num - b.gamma_inf_num) <= a.uncertainties["gamma_inf_num"]


def test_asymptotic_slopes(dim):
    g = 8 * math.pi
    p = solve_for_gamma(g, dim)
    so = asymptotic_slope(p, "origin")
    si = asymptotic_slope(p, "infinity")
    assert so.value == pytest.approx(gamma_to_slope(g, dim), rel=1e-8)
    assert si.value == pytest.approx(-gamma_to_slope(mass_equation_root(g, dim), dim), rel=1e-8)
    assert so.uncertainty >= so.fit_deviation and so.samples > 10
    with pytest.raises(DomainError):
        asymptotic_slope(p, "middle")


def test_asymptotic_slope_needs_span():
    p = solve_for_gamma(1.0, Dimension(2), SolveConfig(r_min=0.5, r_max=4.0, per_decade=50))
    with pytest.raises(InsufficientSpanError):
        asymptotic_slope(p, "origin")
    with pytest.raises(InsufficientSpanError):
        measure(p)


def test_mass_of_is_additive(dim):
    p = solve_for_gamma(3.0, dim)
    whole = mass_of(p, 0.0, math.inf)
    parts = mass_of(p, 0.0, 0.7) + mass_of(p, 0.7, 20.0) + mass_of(p, 20.0, math.inf)
    assert parts == pytest.approx(whole, rel=1e-12)
    assert mass_of(p, 2.0, 2.0) == 0.0
    with pytest.raises(DomainError):
        mass_of(p, 2.0, 1.0)


def test_mass_of_closed_form_is_eight_pi():
    p = sample_profile(ClosedFormFamily(Family.ENTIRE))
    assert mass_of(p, 0.0, math.inf) == pytest.approx(8 * math.pi, rel=1e-12)


def test_cauchy_solve_reproduces_peak_profile(dim):
    p = solve_for_gamma(7.0, dim)
    i = p.meta["peak_index"] + 40
    r0 = p.grid[i]
    r_out = p.grid[[5, 100, 700, -3]]
    U, rup = solve_cauchy(r0, p.U[i], p.rUprime[i] / r0, dim, r_out)
    np.testing.assert_allclose(U, p.U[[5, 100, 700, -3]], rtol=1e-8, atol=1e-8)
    np.testing.assert_allclose(rup, p.rUprime[[5, 100, 700, -3]], rtol=1e-7, atol=1e-8)


def test_cauchy_validation():
    with pytest.raises(DomainError):
        solve_cauchy(1.0, 0.0, 0.0, 2, [2.0])
    with pytest.raises(DomainError):
        solve_cauchy(1.0, 0.0, 1.0, 2, [-1.0])


def test_solve_validation():
    with pytest.raises(DomainError):
        solve_from_peak(701.0, Dimension(2))
    with pytest.raises(DomainError):
        solve_from_peak(float("nan"), Dimension(2))
    with pytest.raises(DomainError):
        solve_for_gamma(0.0, Dimension(2))
    with pytest.raises(DomainError):
        SolveConfig(r_min=2.0)
    with pytest.raises(DomainError):
        SolveConfig(rel_tol=0.0)
    with pytest.raises(DomainError):
        SolveConfig(bootstrap_step=0.1)


def test_peak_expansion_and_state():
    U, F, M = peak_expansion(0.3, 3, 1.0)
    assert (U, F, M) == (0.3, 0.0, 0.0)
    st_ = OdeState(r=2.0, U=0.0, F=-8.0, M=8.0, n=4)
    assert st_.rUprime == pytest.approx(-2.0)
    assert st_.Uprime == pytest.approx(-1.0)


def test_meta_records_solver():
    p = solve_from_peak(1.0, Dimension(3))
    assert p.meta["alpha0"] == 1.0 and p.meta["steps"] > 0 and p.meta["backend"] in ("cython", "python")
    assert p.tol == SolveConfig().rel_tol
