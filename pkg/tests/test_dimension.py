import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nliouville.dimension import (
    Dimension,
    SingularWeights,
    ball_volume,
    c_n,
    critical_mass,
    gamma_to_slope,
    slope_to_gamma,
)
from nliouville.errors import DomainError


@pytest.mark.parametrize("n", range(1, 13))
def test_ball_volume_matches_gamma_function(n):
    assert ball_volume(n) == pytest.approx(math.pi ** (n / 2) / math.gamma(n / 2 + 1), rel=1e-14)


def test_low_dimensional_volumes():
    assert ball_volume(2) == math.pi
    assert ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert Dimension(3).sphere_area == pytest.approx(4 * math.pi, rel=1e-15)


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5])
def test_dimension_rejects_bad_n(bad):
    with pytest.raises(DomainError):
        Dimension(bad)


def test_ball_volume_rejects_non_integer():
    with pytest.raises(DomainError):
        ball_volume(1.5)


def test_c_n_values():
    assert c_n(2) == 8
    assert c_n(3) == pytest.approx(3 * 4.5 ** 2)
    assert c_n(4) == pytest.approx(4 * (16 / 3) ** 3)


def test_slope_map_in_the_plane():
    assert slope_to_gamma(1.5, 2) == pytest.approx(3 * math.pi)
    assert gamma_to_slope(8 * math.pi, 2) == pytest.approx(4.0)
    assert slope_to_gamma(0.0, 3) == 0.0 and gamma_to_slope(0.0, 3) == 0.0


@given(st.integers(2, 8), st.floats(-50, 50).filter(lambda x: x == 0 or abs(x) > 1e-30))
def test_slope_gamma_round_trip(n, s):
    g = slope_to_gamma(s, n)
    assert math.copysign(1, g) == math.copysign(1, s) or s == 0
    assert gamma_to_slope(g, n) == pytest.approx(s, rel=1e-12, abs=1e-300)


@given(st.integers(2, 6), st.floats(-0.99, 5))
def test_critical_mass_reduces_to_n_to_the_n_omega(n, a):
    d = Dimension(n)
    assert critical_mass(0.0, d) == pytest.approx(n ** n * d.omega_n)
    assert critical_mass(a, d) == pytest.approx(n ** n * (a + 1) ** (n - 1) * d.omega_n)


def test_singular_weights_validation():
    d = Dimension(2)
    SingularWeights(0.0, -4 * math.pi + 0.1, d)
    with pytest.raises(DomainError, match="gamma"):
        SingularWeights(0.0, -4 * math.pi, d)
    with pytest.raises(DomainError, match="gamma_inf"):
        SingularWeights(0.0, 1.0, d, gamma_inf=4 * math.pi)
