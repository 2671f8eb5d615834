# desc: Strongly connected components and the bow-tie (IN, core, OUT) around the largest one
# ----------------------------------------------------------------------------
from dataclasses import dataclass
from typing import FrozenSet, Tuple
from lib.graph.digraph import DiGraph
from lib.singlehit import forward_reach
import numpy as np
import json


def scc_decompose(g: DiGraph) -> np.ndarray:
    """Labels every vertex with its strongly connected component.

    Iterative lowlink search with an explicit stack, safe for millions of vertices. Labels are assigned in
    the order components complete, which is a reverse topological order of the condensation: label 0 has no
    edge into a later label.

    :return: int array scc_id of length n
    """

    n = g.n
    indptr = g.indptr.tolist()
    indices = g.indices.tolist()

    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    labels = [-1] * n
    stack = []
    counter = 0
    label = 0

    for root in range(n):
        if index[root] != -1:
            continue

        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [[root, indptr[root]]]

        while work:
            frame = work[-1]
            v, pos = frame
            if pos < indptr[v + 1]:
                frame[1] = pos + 1
                w = indices[pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append([w, indptr[w]])
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue

            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]

            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    labels[w] = label
                    if w == v:
                        break
                label += 1

    return np.array(labels, dtype=np.int64)


@dataclass(frozen=True)
class BowTie:
    """Largest strongly connected core with the vertices reaching it (in_set) and reached from it (out_set).
    Both in_set and out_set contain the core."""

    n: int
    scc_id: np.ndarray
    largest_scc: FrozenSet[int]
    in_set: FrozenSet[int]
    out_set: FrozenSet[int]

    @property
    def fractions(self) -> Tuple[float, float, float]:
        """(|in| / n, |out| / n, |core| / n)"""
        return len(self.in_set) / self.n, len(self.out_set) / self.n, len(self.largest_scc) / self.n

    def summary(self) -> dict:
        in_frac, out_frac, scc_frac = self.fractions
        return {
            'n': self.n,
            'scc_size': len(self.largest_scc),
            'in_size': len(self.in_set),
            'out_size': len(self.out_set),
            'in_frac': in_frac,
            'out_frac': out_frac,
            'scc_frac': scc_frac,
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.summary(), indent=indent)


def bowtie_extract(g: DiGraph) -> BowTie:
    """Bow-tie around the largest SCC; ties between equally large components go to the one holding the
    smallest vertex id"""

    if g.n == 0:
        raise ValueError('Bow-tie of an empty graph is undefined')

    scc_id = scc_decompose(g)
    sizes = np.bincount(scc_id)
    smallest_member = np.full(sizes.size, g.n, dtype=np.int64)
    np.minimum.at(smallest_member, scc_id, np.arange(g.n))

    # Largest size first, then smallest member id
    best = np.lexsort((smallest_member, -sizes))[0]
    core = np.flatnonzero(scc_id == best).tolist()

    return BowTie(n=g.n, scc_id=scc_id, largest_scc=frozenset(core),
                  in_set=forward_reach(g.reverse(), core), out_set=forward_reach(g, core))
