import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grassfeed.errors import NoRoot
from grassfeed.wishart_cond import (
    WishartShape,
    solve_edge_angle,
    trace_binned_slopes,
    zeta1,
    zeta1_asymptotic,
    zeta_mc,
    zeta_mc_all,
)


def test_single_eigenvalue_is_the_trace():
    assert zeta_mc(WishartShape(1, 3), 1, 1000, 0) == (1.0, 0.0)
    assert zeta1_asymptotic(WishartShape(1, 1)) == 1.0


def test_exact_two_by_two_shares():
    mean, se = zeta_mc_all(WishartShape(2, 2), 10**6, 1)
    assert abs(mean[0] - 0.875) <= 3 * se[0]
    assert abs(mean[1] - 0.125) <= 3 * se[1]


def test_edge_angle_square_case():
    a = solve_edge_angle(WishartShape(2, 2))
    assert math.isclose(a + math.sin(a), math.pi / 2, abs_tol=1e-10)
    assert math.isclose(a, 0.8317, abs_tol=1e-4)
    assert math.isclose(zeta1_asymptotic(WishartShape(2, 2)), 0.8937, abs_tol=1e-4)


def test_asymptotic_vs_mc_four_by_four():
    mean, _ = zeta_mc_all(WishartShape(4, 4), 10**6, 2)
    assert abs(zeta1_asymptotic(WishartShape(4, 4)) / mean[0] - 1.0) <= 0.05


@pytest.mark.parametrize("m,n", [(2, 3), (3, 5), (4, 8)])
def test_shares_sum_and_order(m, n):
    mean, se = zeta_mc_all(WishartShape(m, n), 100_000, 3)
    assert abs(mean.sum() - 1.0) <= max(3 * math.sqrt(np.sum(se**2)), 1e-12)
    for i in range(m - 1):
        assert mean[i] + 3 * math.hypot(se[i], se[i + 1]) >= mean[i + 1]
    assert mean[-1] > 0


def test_trace_decile_proportionality():
    _, ratios = trace_binned_slopes(WishartShape(3, 5), 200_000, 4)
    assert np.max(np.abs(ratios / ratios.mean() - 1.0)) <= 0.05


@given(m=st.integers(2, 40), extra=st.integers(0, 60))
def test_asymptotic_in_range(m, extra):
    z = zeta1_asymptotic(WishartShape(m, m + extra))
    assert 1.0 / m < z <= 1.0


def test_zeta1_is_orientation_free():
    assert zeta1(4, 8) == zeta1(8, 4) == zeta1_asymptotic(WishartShape(4, 8))
    # small shapes use the memoised Monte Carlo value
    assert abs(zeta1(2, 2) - 0.875) < 0.002


def test_shape_validation():
    with pytest.raises(ValueError):
        WishartShape(3, 2)
    with pytest.raises(ValueError):
        WishartShape(2, 2, beta=1)
    with pytest.raises(ValueError):
        zeta_mc(WishartShape(2, 2), 3, 100, 0)


def test_no_root_is_reported(monkeypatch):
    import grassfeed.wishart_cond as wc

    monkeypatch.setattr(wc, "_quantile_equation", lambda shape: (lambda a: 1.0))
    with pytest.raises(NoRoot):
        solve_edge_angle(WishartShape(2, 2))
