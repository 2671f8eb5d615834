# desc: Random digraph models - directed Erdos-Renyi G(n, lambda/n) and i.i.d.-outdegree digraphs
# Each model draws a DiGraph from a numpy Generator, deterministic given the stream state
# ----------------------------------------------------------------------------
from abc import ABC, abstractmethod
from lib.graph.degree import DegreeLaw, BinomialDegree
from lib.graph.digraph import DiGraph
import numpy as np
import logging
import math

logger = logging.getLogger(__name__)


class GraphModel(ABC):
    @property
    @abstractmethod
    def n(self) -> int:
        # Vertex count of every graph the model draws
        pass

    @abstractmethod
    def outdegree_law(self) -> DegreeLaw:
        # Marginal law of a single vertex's out-degree
        pass

    @abstractmethod
    def generate(self, rng: np.random.Generator) -> DiGraph:
        # Draws one graph using rng
        pass


class GnpModel(GraphModel):

    def __init__(self, n: int, lam: float):
        """Directed Erdos-Renyi graph: each ordered pair (u, v), u != v, is an edge independently with
        probability lam / n.

        :param n: number of vertices, at least 2
        :param lam: mean out-degree scale, 0 < lam < n
        """

        if n < 2:
            raise ValueError('G(n, lambda/n) needs n >= 2, got n={}'.format(n))
        if not 0 < lam < n:
            raise ValueError('G(n, lambda/n) needs 0 < lambda < n, got lambda={} with n={}'.format(lam, n))

        self._n = int(n)
        self.lam = float(lam)

    @property
    def n(self) -> int:
        return self._n

    @property
    def p(self) -> float:
        return self.lam / self._n

    def outdegree_law(self) -> DegreeLaw:
        return BinomialDegree.gnp_outdegree(self._n, self.lam)

    def generate(self, rng: np.random.Generator) -> DiGraph:
        """Geometric skip sampling over the n(n-1) ordered-pair indices, so the cost is O(edges)
        rather than n^2 coin flips. Index k encodes the pair (k // (n-1), k % (n-1)) with the
        second coordinate shifted past the diagonal."""

        n = self._n
        pairs = n * (n - 1)
        expected = pairs * self.p
        batch = int(expected + 6.0 * math.sqrt(expected) + 16)

        chunks = []
        last = -1
        while True:
            positions = last + np.cumsum(rng.geometric(self.p, size=batch))
            chunks.append(positions[positions < pairs])
            if positions[-1] >= pairs:
                break
            last = int(positions[-1])

        positions = np.concatenate(chunks)
        src, rem = np.divmod(positions, n - 1)
        dst = rem + (rem >= src)

        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        logger.debug('G(n=%d, lambda=%s): drew %d edges', n, self.lam, dst.size)

        return DiGraph(n, indptr, dst)

    def __repr__(self):
        return "GnpModel(n={}, lam={})".format(self._n, self.lam)


class IIDOutdegreeModel(GraphModel):

    def __init__(self, n: int, law: DegreeLaw):
        """Out-degrees are i.i.d. draws from law; given d_out(u) = k, the out-neighbors of u are a
        uniformly random k-subset of the other n-1 vertices, independently across u.

        :param n: number of vertices
        :param law: out-degree distribution, supported on {0, ..., n-1}
        """

        if n < 1:
            raise ValueError('Vertex count must be positive, got {}'.format(n))

        self._n = int(n)
        self.law = law

    @property
    def n(self) -> int:
        return self._n

    def outdegree_law(self) -> DegreeLaw:
        return self.law

    def generate(self, rng: np.random.Generator) -> DiGraph:
        n = self._n
        degrees = np.asarray(self.law.sample(n, rng), dtype=np.int64)

        if degrees.size and (degrees.min() < 0 or degrees.max() > n - 1):
            bad = int(degrees.max()) if degrees.max() > n - 1 else int(degrees.min())
            raise ValueError('Sampled out-degree {} is outside [0, {}]'.format(bad, n - 1))

        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        src = np.repeat(np.arange(n, dtype=np.int64), degrees)
        # Offsets into the n-1 non-self destinations; shifted past u at the end
        offsets = np.empty(indptr[-1], dtype=np.int64)

        # Rows with k^2 > n-1 would rarely survive rejection, so they get an exact subset draw each
        dense = np.flatnonzero(degrees * degrees > n - 1)
        for u in dense:
            offsets[indptr[u]:indptr[u + 1]] = rng.choice(n - 1, size=degrees[u], replace=False)

        # Sparse rows: draw with replacement and redraw any row that collided
        pending = np.flatnonzero((degrees > 0) & (degrees * degrees <= n - 1))
        while pending.size:
            lens = degrees[pending]
            ends = np.cumsum(lens)
            slots = np.arange(ends[-1]) + np.repeat(indptr[pending] - (ends - lens), lens)
            offsets[slots] = rng.integers(0, n - 1, size=slots.size)

            rows, draws = src[slots], offsets[slots]
            order = np.lexsort((draws, rows))
            rows, draws = rows[order], draws[order]
            collided = (rows[1:] == rows[:-1]) & (draws[1:] == draws[:-1])
            pending = np.unique(rows[1:][collided])

        dst = offsets + (offsets >= src)
        dst = dst[np.lexsort((dst, src))]

        return DiGraph(n, indptr, dst)

    def __repr__(self):
        return "IIDOutdegreeModel(n={}, law={})".format(self._n, self.law)


def gen_gnp_digraph(n: int, lam: float, rng: np.random.Generator) -> DiGraph:
    """Draws G(n, lam/n)"""
    return GnpModel(n, lam).generate(rng)


def gen_iid_outdegree_digraph(n: int, degree_sampler: DegreeLaw, rng: np.random.Generator) -> DiGraph:
    """Draws an i.i.d.-outdegree digraph with uniform destinations"""
    return IIDOutdegreeModel(n, degree_sampler).generate(rng)


def zero_outdegree_fraction(g: DiGraph) -> float:
    """Fraction of vertices with no out-edges (their liabilities are owed outside the network)"""
    if g.n == 0:
        return 0.0
    return np.count_nonzero(g.out_degrees == 0) / g.n
