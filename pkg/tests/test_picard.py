import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nliouville.dimension import Dimension
from nliouville.errors import DomainError
from nliouville.radial_ode import (
    picard_constant,
    picard_delta,
    picard_local_solve,
    solve_cauchy,
)


def test_lipschitz_constant():
    assert picard_constant(2.0, 2) == 1.0
    # (1 + 1/2) * (4 * 2^4)^(1/2)
    assert picard_constant(2.0, 3) == pytest.approx(12.0)


def test_delta_is_the_smallest_bound():
    e = math.exp(-3.0)
    want2 = 0.9 * min(1 / 4, 1 / 24, e / (2 * 3 ** 3), e / (2 * 1.0 * 3 ** 2))
    assert picard_delta(2.0, 2) == pytest.approx(want2, rel=1e-15)
    want3 = 0.9 * min(1 / 4, 1 / 24, e / (2 * 3 ** 6), e / (2 * 12.0 * 3 ** 3))
    assert picard_delta(2.0, 3) == pytest.approx(want3, rel=1e-15)


def test_delta_validation():
    with pytest.raises(DomainError):
        picard_delta(1.0, 2)
    with pytest.raises(DomainError):
        picard_delta(2.0, 2, safety=1.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_iterates_contract_and_match_rk(n):
    d = Dimension(n)
    res = picard_local_solve(1.3, 0.7, -1.1, d)
    assert res.converged
    assert 0 <= res.contraction_factor < 1
    assert res.theoretical_factor < 1
    assert all(b <= a for a, b in zip(res.diffs, res.diffs[1:]))
    idx = np.r_[0:res.r.size:128]
    idx = idx[res.r[idx] != 1.3]
    U, _ = solve_cauchy(1.3, 0.7, -1.1, d, res.r[idx])
    assert np.max(np.abs(res.U[idx] - U)) < 1e-10
    assert res.r[0] == pytest.approx(1.3 - res.delta) and res.r[-1] == pytest.approx(1.3 + res.delta)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3]), st.floats(0.5, 2.0), st.floats(-2.0, 2.0),
       st.floats(0.5, 2.0), st.booleans())
def test_contraction_in_the_box(n, r0, a0, a1, neg):
    res = picard_local_solve(r0, a0, -a1 if neg else a1, Dimension(n), M=2.0, panels=512)
    assert res.contraction_factor < 1
    assert res.U[res.r.size // 2] == a0


def test_box_and_panel_validation():
    d = Dimension(2)
    with pytest.raises(DomainError):
        picard_local_solve(3.0, 0.0, 1.0, d, M=2.0)
    with pytest.raises(DomainError):
        picard_local_solve(1.0, 2.5, 1.0, d, M=2.0)
    with pytest.raises(DomainError):
        picard_local_solve(1.0, 0.0, 0.1, d, M=2.0)
    with pytest.raises(DomainError):
        picard_local_solve(1.0, 0.0, 1.0, d, panels=33)


def test_single_iteration_is_not_converged():
    res = picard_local_solve(1.0, 0.0, 1.0, Dimension(2), iters=1)
    assert res.iterations == 1 and not res.converged and res.ratios == []
