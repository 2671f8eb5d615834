from lib.analytics import rho_out
from lib.graph.digraph import DiGraph
from lib.graph.generate import gen_gnp_digraph
from lib.singlehit import bfs_order, build_single_hit, forward_reach, truncated_outdegree_sampler
import numpy as np
import pytest
import math


@pytest.fixture
def mixed_degrees():
    # a=0 has out-degree 1, b=1 has 2, c=2 has 4
    edges = [(0, 3), (1, 3), (1, 4), (2, 3), (2, 4), (2, 5), (2, 6)]
    return DiGraph.from_edges(7, edges)


def test_build_single_hit_zero_cutoff_is_empty(mixed_degrees):
    assert build_single_hit(mixed_degrees, 0).edge_count == 0


def test_build_single_hit_vacuous_cutoff(mixed_degrees):
    assert build_single_hit(mixed_degrees, 4) == mixed_degrees


def test_build_single_hit_is_all_or_nothing(mixed_degrees):
    sh = build_single_hit(mixed_degrees, 2)
    assert sh.out_adj(0).tolist() == [3]
    assert sh.out_adj(1).tolist() == [3, 4]
    assert sh.out_adj(2).tolist() == []
    assert sh.n == mixed_degrees.n


def test_build_single_hit_uses_original_degrees():
    g = gen_gnp_digraph(2000, 3.0, np.random.default_rng(6))
    sh = build_single_hit(g, 2)
    assert build_single_hit(sh, 2) == sh
    kept = sh.out_degrees > 0
    assert np.array_equal(sh.out_degrees[kept], g.out_degrees[kept])
    assert np.all(g.out_degrees[~kept & (g.out_degrees > 0)] > 2)


def test_forward_reach_examples():
    assert forward_reach(DiGraph.empty(5), [3]) == {3}
    path = DiGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert forward_reach(path, [0]) == {0, 1, 2, 3}
    cycle = DiGraph.from_edges(4, [(0, 1), (1, 2), (2, 0)])
    assert forward_reach(cycle, [1]) == {0, 1, 2}


def test_bfs_order_is_breadth_first():
    g = DiGraph.from_edges(6, [(0, 1), (0, 2), (1, 3), (2, 4), (4, 5)])
    assert bfs_order(g, [0]) == [0, 1, 2, 3, 4, 5]
    assert bfs_order(g, [4, 1]) == [1, 4, 3, 5]


def test_forward_reach_rejects_bad_source():
    with pytest.raises(ValueError):
        forward_reach(DiGraph.empty(3), [3])


def test_forward_reach_is_monotone():
    rng = np.random.default_rng(9)
    g = gen_gnp_digraph(500, 1.5, rng)
    for _ in range(50):
        small = rng.choice(500, size=3, replace=False).tolist()
        large = small + rng.choice(500, size=3, replace=False).tolist()
        assert forward_reach(g, small) <= forward_reach(g, large)

        u, v = (int(x) for x in rng.choice(500, size=2, replace=False))
        if v not in g.out_adj(u).tolist():
            assert forward_reach(g, small) <= forward_reach(g.with_edge(u, v), small)


def test_truncated_sampler_zero_cutoff():
    law = truncated_outdegree_sampler(1000, 2.0, 0)
    assert law.max_degree == 0
    assert law.pmf(0) == pytest.approx(1.0)
    assert not law.sample(1000, np.random.default_rng(0)).any()


def test_truncated_pmf_poisson_limit():
    law = truncated_outdegree_sampler(10 ** 6, 2.0, 3)
    for k in (1, 2, 3):
        assert law.pmf(k) == pytest.approx(math.exp(-2) * 2 ** k / math.factorial(k), abs=1e-5)
    assert law.pmf(0) == pytest.approx(0.27822, abs=1e-4)
    assert law.pmf(4) == 0
    assert law.pmf_vector().sum() == pytest.approx(1.0)


def test_truncated_sampler_mean_matches_branching_mean():
    law = truncated_outdegree_sampler(10 ** 5, 2.0, 3)
    draws = law.sample(10 ** 6, np.random.default_rng(17))
    sigma = draws.std() / math.sqrt(draws.size)
    assert abs(draws.mean() - rho_out(2.0, 3)) <= 3 * sigma
    assert law.mean() == pytest.approx(10 * math.exp(-2), abs=5e-4)


def test_truncated_sampler_rejects_bad_lambda():
    with pytest.raises(ValueError):
        truncated_outdegree_sampler(10, 10.0, 2)
