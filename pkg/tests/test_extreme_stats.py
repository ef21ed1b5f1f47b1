import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grassfeed.extreme_stats import (
    EULER_GAMMA,
    ExtremeParams,
    b_n,
    chi2_sf,
    expected_top_sum,
    harmonic,
    mc_top_sum,
    mc_top_sums,
    solve_a_n,
)


def test_chi2_sf_values():
    assert chi2_sf(0.0, 3) == 1.0
    assert math.isclose(chi2_sf(1.7, 1), math.exp(-1.7))
    assert math.isclose(chi2_sf(2.0, 2), 3.0 * math.exp(-2.0))
    assert math.isclose(chi2_sf(2.0, 2), 0.40601, abs_tol=1e-5)
    with pytest.raises(ValueError):
        chi2_sf(-1.0, 1)


def test_solve_a_n_values():
    assert math.isclose(solve_a_n(100, 1), math.log(100), abs_tol=1e-9)
    assert math.isclose(solve_a_n(2, 1), math.log(2), abs_tol=1e-9)
    a = solve_a_n(100, 2)
    assert math.isclose(a, 6.6384, abs_tol=1e-4)
    assert math.isclose(chi2_sf(a, 2), 0.01, rel_tol=1e-8)
    with pytest.raises(ValueError):
        solve_a_n(1, 1)


@given(n=st.integers(2, 5000), L=st.integers(1, 16))
def test_solve_a_n_monotone(n, L):
    a = solve_a_n(n, L)
    assert solve_a_n(n + 1, L) > a
    assert solve_a_n(n, L + 1) > a


def test_b_n_values():
    assert b_n(3.3, 1) == 1.0
    assert b_n(1.0, 2) == 1.5
    assert abs(b_n(1e9, 2) - 1.0) < 1e-8


def test_expected_top_sum_values():
    assert math.isclose(expected_top_sum(ExtremeParams(100, 1, 1)), 5.18239, abs_tol=1e-5)
    assert math.isclose(expected_top_sum(ExtremeParams(100, 2, 1)), 9.36477, abs_tol=1e-5)
    assert math.isclose(expected_top_sum(ExtremeParams(100, 1, 1)), math.log(100) + EULER_GAMMA, abs_tol=1e-9)
    assert expected_top_sum(ExtremeParams(1, 1, 3)) == 3.0


@given(n=st.integers(8, 400), l=st.integers(1, 4), L=st.integers(1, 8))
def test_expected_top_sum_monotone(n, l, L):
    v = expected_top_sum(ExtremeParams(n, l, L))
    assert expected_top_sum(ExtremeParams(n + 1, l, L)) > v
    assert expected_top_sum(ExtremeParams(n, l + 1, L)) > v
    assert expected_top_sum(ExtremeParams(n, l, L + 1)) > v


def test_params_validation():
    with pytest.raises(ValueError):
        ExtremeParams(3, 4, 1)
    with pytest.raises(ValueError):
        ExtremeParams(3, 1, 0)


def test_harmonic():
    assert harmonic(1) == 1.0
    assert math.isclose(harmonic(100), 5.18738, abs_tol=1e-5)


def test_mc_trivial_cases():
    m, se = mc_top_sum(ExtremeParams(1, 1, 1), 10**6, 1)
    assert abs(m - 1.0) <= 3 * se
    m, se = mc_top_sum(ExtremeParams(2, 2, 1), 10**6, 1)
    assert abs(m - 2.0) <= 3 * se
    m, se = mc_top_sum(ExtremeParams(5, 5, 3), 10**5, 1)
    assert abs(m - 15.0) <= 3 * se


def test_mc_max_of_exponentials_is_harmonic():
    m, se = mc_top_sum(ExtremeParams(100, 1, 1), 10**6, 2)
    assert abs(m - harmonic(100)) <= 3 * se


def test_asymptotic_vs_mc_n100_l2_L4():
    m, _ = mc_top_sum(ExtremeParams(100, 2, 4), 10**6, 3)
    assert abs(expected_top_sum(ExtremeParams(100, 2, 4)) - m) <= 0.03 * m


def test_mc_top_sums_shares_draws():
    many = mc_top_sums(50, [1, 2, 4], 2, 20_000, 4)
    assert many[1][0] < many[2][0] < many[4][0]
    # the single-l wrapper is the same draw set
    assert mc_top_sum(ExtremeParams(50, 2, 2), 20_000, 4) == many[2]
    with pytest.raises(ValueError):
        mc_top_sums(3, [4], 1, 100, 0)


@pytest.mark.parametrize("L", [1, 2, 4])
@pytest.mark.parametrize("n", [50, 100, 500])
def test_asymptotic_tracks_mc(n, L):
    mc = mc_top_sums(n, [1, 2, 4], L, 10**5, 5)
    for l, (m, se) in mc.items():
        asym = expected_top_sum(ExtremeParams(n, l, L))
        assert abs(asym - m) <= max(3 * se, 0.03 * m)
