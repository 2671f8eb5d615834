# desc: Sender-truncated graph, forward reachability and the truncated out-degree law
# Single-hit contagion travels only along edges whose sender is active; this module isolates that part
# ----------------------------------------------------------------------------
from collections import deque
from typing import FrozenSet, Iterable, List
from lib.graph.degree import DegreeLaw
from lib.graph.digraph import DiGraph
from scipy import stats
import numpy as np


class TruncatedDegreeLaw(DegreeLaw):

    def __init__(self, n: int, lam: float, d_star: int):
        """K = B * 1{B <= d_star} with B ~ Binomial(n-1, lam/n): the number of out-edges a vertex keeps in the
        sender-truncated graph. Truncated mass moves to 0, it is never resampled.

        :param n: vertex count of the underlying G(n, lam/n)
        :param lam: mean out-degree scale, 0 < lam < n
        :param d_star: single-hit cutoff
        """

        if not 0 < lam < n:
            raise ValueError('Truncated law needs 0 < lambda < n, got lambda={} with n={}'.format(lam, n))
        if d_star < 0:
            raise ValueError('d_star must be non-negative, got {}'.format(d_star))

        self.n = int(n)
        self.lam = float(lam)
        self.d_star = int(d_star)

    @property
    def max_degree(self) -> int:
        return min(self.d_star, self.n - 1)

    def pmf(self, k: int) -> float:
        trials, p = self.n - 1, self.lam / self.n
        if k == 0:
            return float(stats.binom.pmf(0, trials, p) + stats.binom.sf(self.d_star, trials, p))
        if 1 <= k <= self.max_degree:
            return float(stats.binom.pmf(k, trials, p))
        return 0.0

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        draws = rng.binomial(self.n - 1, self.lam / self.n, size=size).astype(np.int64)
        draws[draws > self.d_star] = 0
        return draws

    def __repr__(self):
        return "TruncatedDegreeLaw(n={}, lam={}, d_star={})".format(self.n, self.lam, self.d_star)


def truncated_outdegree_sampler(n: int, lam: float, d_star: int) -> TruncatedDegreeLaw:
    return TruncatedDegreeLaw(n, lam, d_star)


def build_single_hit(g: DiGraph, d_star: int) -> DiGraph:
    """Keeps every out-edge of a sender with d_out <= d_star and none of the others.

    Activity is judged on the degrees of g itself; the truncated graph is never re-tested, so applying this
    twice with the same d_star returns the same graph.
    """

    degrees = g.out_degrees
    active = degrees <= d_star
    kept = np.where(active, degrees, 0)

    indptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(kept, out=indptr[1:])

    return DiGraph(g.n, indptr, g.indices[np.repeat(active, degrees)])


def bfs_order(g: DiGraph, sources: Iterable[int]) -> List[int]:
    """Vertices reachable from sources (sources first, ascending), in breadth-first discovery order"""

    visited = np.zeros(g.n, dtype=bool)
    order = []
    for s in sorted(set(int(v) for v in sources)):
        if not 0 <= s < g.n:
            raise ValueError('Source vertex {} out of range [0, {})'.format(s, g.n))
        visited[s] = True
        order.append(s)

    queue = deque(order)
    indptr, indices = g.indptr, g.indices
    while queue:
        u = queue.popleft()
        for v in indices[indptr[u]:indptr[u + 1]].tolist():
            if not visited[v]:
                visited[v] = True
                order.append(v)
                queue.append(v)

    return order


def forward_reach(g: DiGraph, sources: Iterable[int]) -> FrozenSet[int]:
    """Set of vertices with a directed path from some source, sources included"""
    return frozenset(bfs_order(g, sources))
