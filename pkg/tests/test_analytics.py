from lib.analytics import (BranchingParams, gw_domination_check, gw_total_progeny, multi_hit_bound, poisson_cdf,
                           rho_out, shock_size)
from lib.graph.degree import BinomialDegree, ConstantDegree
from scipy import stats
import numpy as np
import pytest
import math


def test_poisson_cdf_examples():
    assert poisson_cdf(0.0, 0) == 1.0
    assert poisson_cdf(2.0, 2) == pytest.approx(5 * math.exp(-2), rel=1e-12)
    assert poisson_cdf(1.0, -1) == 0.0


def test_poisson_cdf_rejects_negative_mean():
    with pytest.raises(ValueError):
        poisson_cdf(-0.1, 3)


def test_rho_out_examples():
    assert rho_out(1.0, 1) == pytest.approx(math.exp(-1), rel=1e-12)
    assert rho_out(2.0, 3) == pytest.approx(10 * math.exp(-2), rel=1e-12)
    assert rho_out(3.7, 0) == 0.0


def test_branching_params_regime():
    assert BranchingParams(2.0, 1).regime == 'subcritical'
    assert BranchingParams(2.0, 3).regime == 'supercritical'
    params = BranchingParams(2.0, 3)
    assert 0 <= params.rho_out <= params.lam


@pytest.mark.parametrize('lam, d_star', [(1.0, 1), (2.0, 3), (0.5, 2)])
def test_rho_out_matches_monte_carlo(lam, d_star):
    draws = np.random.default_rng(int(lam * 10) + d_star).poisson(lam, size=10 ** 6)
    x = np.where(draws <= d_star, draws, 0)
    sigma = x.std() / math.sqrt(x.size)
    assert abs(x.mean() - rho_out(lam, d_star)) <= 3 * sigma


def test_small_cutoffs_are_always_subcritical():
    grid = np.linspace(0.01, 20, 4000)
    assert max(rho_out(lam, 1) for lam in grid) == pytest.approx(math.exp(-1), abs=1e-5)
    assert max(rho_out(lam, 2) for lam in grid) < 1


def test_gw_no_reproduction():
    assert gw_total_progeny(ConstantDegree(0), 5, 100, np.random.default_rng(0)) == 5


def test_gw_saturates_at_cap():
    assert gw_total_progeny(ConstantDegree(2), 1, 100, np.random.default_rng(0)) == 100


def test_gw_rejects_bad_cap():
    with pytest.raises(ValueError):
        gw_total_progeny(ConstantDegree(1), 5, 4, np.random.default_rng(0))


def test_gw_subcritical_mean_progeny():
    rng = np.random.default_rng(123)
    offspring = BinomialDegree(1, 0.5)
    sizes = np.array([gw_total_progeny(offspring, 1, 10 ** 6, rng) for _ in range(10 ** 5)])
    sigma = sizes.std() / math.sqrt(sizes.size)
    assert abs(sizes.mean() - 2.0) <= 3 * sigma


def test_multi_hit_bound_examples():
    assert multi_hit_bound(2.0, [], 10) == 0
    assert multi_hit_bound(1.0, [10], 10 ** 4) == pytest.approx(0.01)
    assert multi_hit_bound(2.0, [3, 4], 100) == 1.0


@pytest.mark.parametrize('n, c, expected', [(1000, 1.0, 7), (8, 1.0, 3), (2, 1e-9, 1)])
def test_shock_size_examples(n, c, expected):
    assert shock_size(n, c) == expected


def test_shock_size_rejects_oversized_shock():
    with pytest.raises(ValueError):
        shock_size(2, 10.0)
    with pytest.raises(ValueError):
        shock_size(100, 0.0)


def test_domination_check_flags_heavier_tail():
    light = [1] * 90 + [2] * 10
    heavy = [1] * 50 + [5] * 50
    assert gw_domination_check(light, heavy)['passed'].all()
    assert not gw_domination_check(heavy, light)['passed'].all()


def test_poisson_cdf_large_mean():
    # e^-800 is below the smallest double; the sum must not collapse to 0
    assert poisson_cdf(800.0, 2000) == pytest.approx(1.0, abs=1e-12)
    assert poisson_cdf(800.0, 800) == pytest.approx(stats.poisson.cdf(800, 800.0), rel=1e-9)
    assert 0.5 < poisson_cdf(800.0, 800) < 0.52
    assert rho_out(800.0, 2000) == pytest.approx(800.0, rel=1e-9)
    assert BranchingParams(800.0, 2000).regime == 'supercritical'
