# desc: Immutable sparse directed graph, stored as out-adjacency in compressed rows
# Vertex ids are 0-based; rows are sorted by destination so edge sets compare canonically
# ----------------------------------------------------------------------------
from typing import Iterable, Tuple
import numpy as np
import pandas as pd


class DiGraph:

    def __init__(self, n: int, indptr, indices):
        """Directed graph on vertices 0..n-1 without self-loops or parallel edges.

        :param n: number of vertices
        :param indptr: int array of length n+1, row offsets into indices
        :param indices: int array of destinations, sorted within each row
        """

        if n < 0:
            raise ValueError('Vertex count must be non-negative, got {}'.format(n))

        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)

        if indptr.shape != (n + 1,) or indptr[0] != 0 or indptr[-1] != indices.size:
            raise ValueError('Row offsets do not describe {} vertices and {} edges'.format(n, indices.size))
        if np.any(np.diff(indptr) < 0):
            raise ValueError('Row offsets must be non-decreasing')
        if indices.size and (indices.min() < 0 or indices.max() >= n):
            raise ValueError('Edge destination out of range [0, {})'.format(n))

        sources = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
        if np.any(sources == indices):
            raise ValueError('Self-loops are not allowed')
        # Within a row destinations have to be strictly increasing (sorted, no duplicates)
        same_row = sources[1:] == sources[:-1]
        if np.any(indices[1:][same_row] <= indices[:-1][same_row]):
            raise ValueError('Out-adjacency rows must be sorted without parallel edges')

        indptr.setflags(write=False)
        indices.setflags(write=False)
        self.n = n
        self.indptr = indptr
        self.indices = indices
        self._out_degrees = None

    # Constructors------------------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'DiGraph':
        """Builds a graph from (src, dst) pairs in any order. Repeated pairs are collapsed."""

        pairs = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls.from_arrays(n, pairs[:, 0], pairs[:, 1])

    @classmethod
    def from_arrays(cls, n: int, src, dst) -> 'DiGraph':
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)

        if src.size and (src.min() < 0 or src.max() >= n):
            raise ValueError('Edge source out of range [0, {})'.format(n))

        # Canonical order is (src, dst); np.unique on the flattened pair index does both
        keys = np.unique(src * max(n, 1) + dst)
        src, dst = keys // max(n, 1), keys % max(n, 1)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

        return cls(n, indptr, dst)

    @classmethod
    def empty(cls, n: int) -> 'DiGraph':
        return cls(n, np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @classmethod
    def complete(cls, n: int) -> 'DiGraph':
        src, dst = np.divmod(np.arange(n * n, dtype=np.int64), n)
        keep = src != dst
        return cls.from_arrays(n, src[keep], dst[keep])

    # Queries-----------------------------------------------------------------
    @property
    def edge_count(self) -> int:
        return int(self.indices.size)

    @property
    def out_degrees(self) -> np.ndarray:
        if self._out_degrees is None:
            degrees = np.diff(self.indptr)
            degrees.setflags(write=False)
            self._out_degrees = degrees
        return self._out_degrees

    def out_degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def out_adj(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def in_degrees(self) -> np.ndarray:
        return np.bincount(self.indices, minlength=self.n)

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """Returns (src, dst) arrays in canonical (src, dst) order"""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.out_degrees)
        return src, np.array(self.indices)

    def reverse(self) -> 'DiGraph':
        """Graph with every edge flipped; its out-adjacency is the in-adjacency of this graph"""
        src, dst = self.edges()
        return DiGraph.from_arrays(self.n, dst, src)

    def with_edge(self, u: int, v: int) -> 'DiGraph':
        """Copy of this graph with the edge u->v added"""
        src, dst = self.edges()
        return DiGraph.from_arrays(self.n, np.append(src, u), np.append(dst, v))

    # Edge-list CSV-----------------------------------------------------------
    def to_csv(self, path):
        """Writes the edge list with a src,dst header, one edge per row, sorted by (src, dst)"""
        src, dst = self.edges()
        pd.DataFrame({'src': src, 'dst': dst}).to_csv(path, index=False, lineterminator='\n')

    @classmethod
    def from_csv(cls, path, n: int = None) -> 'DiGraph':
        """Reads an edge-list CSV. Without n, the vertex count is one past the largest id seen."""
        df = pd.read_csv(path, dtype={'src': np.int64, 'dst': np.int64})
        if list(df.columns) != ['src', 'dst']:
            raise ValueError('Edge list must have header src,dst; got {}'.format(','.join(df.columns)))

        if n is None:
            n = int(max(df['src'].max(), df['dst'].max()) + 1) if len(df) else 0

        return cls.from_arrays(n, df['src'].to_numpy(), df['dst'].to_numpy())

    # Report methods----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, DiGraph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self):
        return "DiGraph(n={}, edge_count={})".format(self.n, self.edge_count)
