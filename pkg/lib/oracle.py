# desc: Brute-force oracles for small graphs and the validation suite built on them
# The oracles share no code with the fast paths they check
# ----------------------------------------------------------------------------
from fractions import Fraction
from itertools import combinations
from typing import FrozenSet, Iterable, Set
from lib.balancesheet import BalanceSheet, d_star, edge_exposure, equity
from lib.bowtie import scc_decompose
from lib.cascade import classify_hits, run_cascade
from lib.graph.digraph import DiGraph
from lib.graph.generate import gen_gnp_digraph
from lib.singlehit import build_single_hit, forward_reach
import numpy as np
import pandas as pd
import logging

logger = logging.getLogger(__name__)

ORACLE_LAMBDAS = (0.5, 2.0, 4.0)
ORACLE_LEVERAGES = (Fraction(3, 2), Fraction(5, 2), Fraction(4))


def brute_force_fixed_point(g: DiGraph, bs: BalanceSheet, shock: Iterable[int]) -> FrozenSet[int]:
    """Smallest default set containing the shock that no outside vertex can join, found by trying every
    superset of the shock in order of size"""

    shock = frozenset(shock)
    in_edges = [[] for _ in range(g.n)]
    for u in range(g.n):
        for v in g.out_adj(u).tolist():
            in_edges[v].append(u)

    free = sorted(set(range(g.n)) - shock)
    for size in range(len(free) + 1):
        for extra in combinations(free, size):
            candidate = shock.union(extra)
            if _is_closed(g, bs, candidate, in_edges):
                return candidate

    return frozenset(range(g.n))


def brute_force_components(g: DiGraph) -> Set[FrozenSet[int]]:
    """Strongly connected components from the boolean transitive closure"""

    n = g.n
    reach = np.eye(n, dtype=bool)
    for u in range(n):
        reach[u, g.out_adj(u)] = True
    for k in range(n):
        reach |= reach[:, [k]] & reach[[k], :]

    mutual = reach & reach.T
    return {frozenset(np.flatnonzero(mutual[v]).tolist()) for v in range(n)}


def label_partition(labels: np.ndarray) -> Set[FrozenSet[int]]:
    return {frozenset(np.flatnonzero(labels == c).tolist()) for c in np.unique(labels)}


def run_validation(instances: int = 1000, seed: int = 0) -> pd.DataFrame:
    """Runs every small-n property check and returns one row per property with its pass count

    :param instances: random instances per randomized property
    :param seed: master seed of the instance corpus
    :return: Dataframe with columns property, checked, failed, passed
    """

    rng = np.random.default_rng(seed)
    rows = []

    failed = order_failed = reach_failed = 0
    for _ in range(instances):
        g, bs, shock = _random_instance(rng, max_n=12)
        trace = run_cascade(g, bs, shock)
        if trace.terminal_set != brute_force_fixed_point(g, bs, shock):
            failed += 1
        if run_cascade(g, bs, shock, order_rng=rng).terminal_set != trace.terminal_set:
            order_failed += 1

        reach = forward_reach(build_single_hit(g, bs.d_star), shock)
        _, multi, _ = classify_hits(trace, g, bs)
        if not reach <= trace.terminal_set or (not multi and reach != trace.terminal_set):
            reach_failed += 1

    rows.append(_row('cascade equals brute-force minimal fixed point', instances, failed))
    rows.append(_row('terminal set independent of processing order', instances, order_failed))
    rows.append(_row('single-hit reach inside cascade, equal without multi-hit', instances, reach_failed))

    failed = 0
    for _ in range(instances):
        g, _, _ = _random_instance(rng, max_n=10)
        if label_partition(scc_decompose(g)) != brute_force_components(g):
            failed += 1
    rows.append(_row('scc decomposition equals transitive-closure components', instances, failed))

    checked = failed = 0
    for C in (Fraction(k, 4) for k in range(5, 81)):
        cutoff = d_star(1, C)
        E = equity(1, C)
        for d in range(1, 25):
            checked += 1
            if (edge_exposure(1, d) >= E) != (d <= cutoff):
                failed += 1
    rows.append(_row('exposure meets equity iff d <= d_star', checked, failed))

    failed = 0
    for C, expected in ((Fraction(5, 2), (2, 1)), (Fraction(4), (2, 3)), (Fraction(3, 2), (1, 1))):
        before = run_cascade(DiGraph.from_edges(3, [(0, 1)]), BalanceSheet(C), [0]).terminal_size
        after = run_cascade(DiGraph.from_edges(3, [(0, 1), (0, 2)]), BalanceSheet(C), [0]).terminal_size
        if (before, after) != expected:
            failed += 1
    rows.append(_row('adding an edge can shrink the cascade', 3, failed))

    report = pd.DataFrame(rows)
    logger.info('validation: %d of %d properties passed', report['passed'].sum(), len(report))

    return report


# Helper methods----------------------------------------------------------
def _is_closed(g: DiGraph, bs: BalanceSheet, candidate: Set[int], in_edges) -> bool:
    # No vertex outside candidate meets equity when hit by all of candidate
    degrees = g.out_degrees
    for v in range(g.n):
        if v in candidate:
            continue
        total = sum((Fraction(bs.L, int(degrees[u])) for u in in_edges[v] if u in candidate), Fraction(0))
        if total >= bs.E:
            return False
    return True


def _random_instance(rng: np.random.Generator, max_n: int):
    lam = float(rng.choice(ORACLE_LAMBDAS))
    C = ORACLE_LEVERAGES[rng.integers(len(ORACLE_LEVERAGES))]
    n = int(rng.integers(int(lam) + 1 if lam >= 2 else 2, max_n + 1))
    g = gen_gnp_digraph(n, lam, rng)
    size = int(rng.integers(1, n + 1))
    shock = rng.choice(n, size=size, replace=False).tolist()

    return g, BalanceSheet(C), shock


def _row(prop: str, checked: int, failed: int) -> dict:
    return {'property': prop, 'checked': checked, 'failed': failed, 'passed': failed == 0}
