import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nliouville.closed_forms import (
    ClosedFormFamily,
    Family,
    eval_entire,
    eval_planar,
    eval_singular_radial,
    kelvin_transform,
    planar_laplacian_residual,
    planar_mass,
    radial_mass_inside,
    radial_n_laplacian_residual,
    radial_rUprime,
    rescale,
    sample_profile,
)
from nliouville.dimension import Dimension, c_n
from nliouville.errors import DomainError
from nliouville.radial_ode import asymptotic_slope, mass_of


def singular(n, alpha=0.0, lam=1.0):
    return ClosedFormFamily(Family.SINGULAR, lam=lam, alpha=alpha, dim=Dimension(n))


def test_entire_plane_value_at_origin():
    assert eval_entire(ClosedFormFamily(Family.ENTIRE), 0.0) == pytest.approx(math.log(8))


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 2.5])
@pytest.mark.parametrize("lam", [0.5, 3.0])
def test_singular_matches_direct_formula(n, alpha, lam):
    r = np.geomspace(1e-3, 1e3, 25)
    q = n / (n - 1)
    direct = np.log(c_n(n) * (alpha + 1) ** n * lam ** n / (1 + lam ** q * r ** (q * (alpha + 1))) ** n)
    np.testing.assert_allclose(eval_singular_radial(singular(n, alpha, lam), r), direct, rtol=1e-13)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_entire_is_singular_at_zero_alpha(n):
    r = np.geomspace(1e-4, 1e4, 17)
    ent = ClosedFormFamily(Family.ENTIRE, lam=2.0, dim=Dimension(n))
    np.testing.assert_allclose(eval_entire(ent, r), eval_singular_radial(singular(n, 0.0, 2.0), r),
                               rtol=1e-15)


def test_entire_large_radius_does_not_overflow():
    v = eval_entire(ClosedFormFamily(Family.ENTIRE), 1e200)
    assert np.isfinite(v) and v < -1000


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.5])
def test_radial_residual_small(n, alpha):
    fam = singular(n, alpha, 1.3)
    for r in (0.3, 0.9, 2.7):
        res = radial_n_laplacian_residual(lambda x: float(eval_singular_radial(fam, x)),
                                          fam.dim, alpha, r, 1e-4)
        scale = r ** (n * alpha) * math.exp(eval_singular_radial(fam, r))
        assert abs(res) < 1e-5 * max(1.0, scale)


def test_radial_residual_detects_wrong_weight():
    fam = singular(3, 1.0)
    res = radial_n_laplacian_residual(lambda x: float(eval_singular_radial(fam, x)), fam.dim, 0.0, 2.0, 1e-4)
    assert abs(res) > 1e-2


def test_radial_residual_step_guard():
    with pytest.raises(DomainError):
        radial_n_laplacian_residual(math.sin, 2, 0.0, 1e-3, 1e-3)


@pytest.mark.parametrize("n,alpha", [(2, 0.0), (3, 1.0), (4, -0.5)])
def test_rUprime_matches_log_derivative(n, alpha):
    fam = singular(n, alpha, 0.7)
    s = np.linspace(-3, 3, 13)
    h = 1e-5
    fd = (eval_singular_radial(fam, np.exp(s + h)) - eval_singular_radial(fam, np.exp(s - h))) / (2 * h)
    np.testing.assert_allclose(radial_rUprime(fam, np.exp(s)), fd, atol=1e-8)


def test_planar_radial_member_matches_radial_formula():
    fam = ClosedFormFamily(Family.PLANAR, alpha=0.5, lam=2.0)
    r = np.geomspace(1e-3, 1e3, 9)
    z = r * np.exp(0.7j)
    direct = np.log(8 * 1.5 ** 2 * 4 * r ** 1.0 / (1 + 4 * r ** 3) ** 2)
    np.testing.assert_allclose(eval_planar(fam, z), direct, rtol=1e-13)
    np.testing.assert_allclose(eval_planar(fam, np.stack([z.real, z.imag], -1)), direct, rtol=1e-13)


def test_planar_zero_alpha_is_the_entire_solution():
    fam = ClosedFormFamily(Family.PLANAR)
    r = np.geomspace(1e-3, 1e3, 9)
    np.testing.assert_allclose(eval_planar(fam, r + 0j), eval_entire(ClosedFormFamily(Family.ENTIRE), r))
    assert eval_planar(fam, 0j) == pytest.approx(math.log(8))


@pytest.mark.parametrize("alpha,c", [(1.0, 1.0), (2.0, 0.5 - 1j), (0.0, 2.0), (1.5, 0.0)])
def test_planar_pde_residual(alpha, c):
    fam = ClosedFormFamily(Family.PLANAR, alpha=alpha, c=c)
    rng = np.random.default_rng(7)
    z = rng.uniform(0.3, 2.5, 40) * np.exp(1j * rng.uniform(0, 2 * np.pi, 40))
    assert np.max(np.abs(planar_laplacian_residual(fam, z))) < 1e-4


def test_planar_residual_is_not_vacuous():
    # u solves -Lap u = e^u, so -Lap u - 2 e^u equals -e^u and must be visible
    fam = ClosedFormFamily(Family.PLANAR, alpha=1.0, c=1.0)
    z = np.array([0.5 + 0.5j, 1.2 - 0.3j])
    bad = planar_laplacian_residual(fam, z) - np.exp(eval_planar(fam, z))
    assert np.all(np.abs(bad) > 1e-2)


@pytest.mark.parametrize("alpha,c", [(1.0, 0.0), (1.0, 1.0), (2.0, 0.0), (2.0, 1.0), (0.0, 3.0)])
def test_planar_mass(alpha, c):
    m = planar_mass(ClosedFormFamily(Family.PLANAR, alpha=alpha, c=c))
    assert m == pytest.approx(8 * math.pi * (alpha + 1), rel=1e-6)


def test_planar_singular_at_origin():
    with pytest.raises(DomainError):
        eval_planar(ClosedFormFamily(Family.PLANAR, alpha=1.0), 0j)


@pytest.mark.parametrize("kwargs", [
    dict(kind=Family.ENTIRE, alpha=1.0),
    dict(kind=Family.SINGULAR, alpha=-1.0),
    dict(kind=Family.PLANAR, alpha=0.5, c=1.0),
    dict(kind=Family.PLANAR, alpha=1.0, dim=Dimension(3)),
    dict(kind=Family.SINGULAR, c=1.0),
    dict(kind=Family.ENTIRE, lam=0.0),
])
def test_family_validation(kwargs):
    with pytest.raises(DomainError):
        ClosedFormFamily(**kwargs)


def test_evaluators_check_kind():
    with pytest.raises(DomainError):
        eval_entire(singular(2), 1.0)
    with pytest.raises(DomainError):
        eval_singular_radial(ClosedFormFamily(Family.ENTIRE), 1.0)
    with pytest.raises(DomainError):
        sample_profile(ClosedFormFamily(Family.PLANAR, alpha=1.0, c=1.0))


@pytest.mark.parametrize("n,alpha", [(2, 0.0), (3, 1.0), (4, 2.5), (2, -0.5)])
def test_mass_inside_matches_quadrature(n, alpha):
    fam = singular(n, alpha, 1.7)
    p = sample_profile(fam)
    # grid nodes: quadrature is exact to rounding
    for r in p.grid[::97]:
        assert radial_mass_inside(fam, r) == pytest.approx(mass_of(p, 0.0, r), rel=1e-10)
    # between nodes the cubic Hermite interpolant of the cumulative mass is O(h^4)
    for r in (1e-2, 0.5, 40.0):
        assert radial_mass_inside(fam, r) == pytest.approx(mass_of(p, 0.0, r), rel=1e-4)
    fine = sample_profile(fam, per_decade=160)
    assert radial_mass_inside(fam, 0.5) == pytest.approx(mass_of(fine, 0.0, 0.5), rel=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.floats(-0.9, 3.0), st.floats(0.2, 5.0))
def test_rescale_moves_along_the_family(n, alpha, mu):
    # v_lam(r) = v_1(mu r) + n (a+1) log mu with lam = mu^(a+1)
    base = sample_profile(singular(n, alpha), 1e-3, 1e3, 10)
    moved = rescale(base, mu)
    target = singular(n, alpha, mu ** (alpha + 1))
    np.testing.assert_allclose(moved.U, eval_singular_radial(target, moved.grid), atol=1e-12)
    np.testing.assert_array_equal(moved.mass_cum, base.mass_cum)


def test_rescale_checks_arguments():
    p = sample_profile(singular(2), 1e-2, 1e2, 10)
    with pytest.raises(DomainError):
        rescale(p, -1.0)
    with pytest.raises(DomainError):
        rescale(p, 2.0, dim=3)


@pytest.mark.parametrize("n,alpha", [(2, 0.0), (3, 1.0), (4, 0.5)])
def test_kelvin_transform(n, alpha):
    fam = singular(n, alpha, 0.8)
    p = sample_profile(fam, 1e-6, 1e6, 20)
    k = kelvin_transform(p)
    assert k.alpha == -(alpha + 2)
    np.testing.assert_allclose(k.grid, 1 / p.grid[::-1], rtol=1e-14)
    np.testing.assert_allclose(k.U, eval_singular_radial(fam, 1 / k.grid), atol=1e-12)
    assert k.mass_cum[-1] == pytest.approx(p.mass_cum[-1], rel=1e-14)
    # the reflected function solves the equation with weight exponent -(alpha + 2)
    res = radial_n_laplacian_residual(lambda x: float(eval_singular_radial(fam, 1 / x)),
                                      fam.dim, -(alpha + 2), 1.3, 1e-4)
    assert abs(res) < 1e-5
    # involution
    kk = kelvin_transform(k)
    np.testing.assert_allclose(kk.log_r, p.log_r, atol=1e-15)
    np.testing.assert_array_equal(kk.U, p.U)
    np.testing.assert_allclose(kk.mass_cum, p.mass_cum, atol=1e-12 * p.mass_cum[-1])
    assert kk.alpha == pytest.approx(alpha)


def test_kelvin_swaps_end_slopes():
    p = sample_profile(singular(3, 1.0), 1e-6, 1e6, 20)
    k = kelvin_transform(p)
    assert asymptotic_slope(k, "origin").value == pytest.approx(-asymptotic_slope(p, "infinity").value,
                                                                rel=1e-14)
    assert mass_of(k, 0.0, math.inf) == pytest.approx(mass_of(p, 0.0, math.inf), rel=1e-8)
