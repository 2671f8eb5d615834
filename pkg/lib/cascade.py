# desc: Default cascade on a balance-sheet network, run round by round to its fixed point
# A vertex defaults once the cumulative exposure from all defaulted in-neighbors reaches equity
# ----------------------------------------------------------------------------
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple
from lib.balancesheet import BalanceSheet, parse_rational
from lib.graph.digraph import DiGraph
import numpy as np
import json
import math

# (delivery round, senders that defaulted in the previous round and hit the vertex)
Hit = Tuple[int, Tuple[int, ...]]


@dataclass
class CascadeTrace:
    """Round-by-round record of one cascade.

    rounds[i] is the set of vertices that defaulted in round i + 1; the shock is round 0 and is kept apart.
    A hit is labelled with the round it is delivered in, so shock vertices hit in round 1.
    """

    n: int
    edge_count: int
    balance_sheet: BalanceSheet
    initial_shock: FrozenSet[int]
    rounds: List[Tuple[int, ...]]
    terminal_set: FrozenSet[int]
    hit_profile: Dict[int, List[Hit]]
    round_double_hit_count: int
    multi_hit_defaults: FrozenSet[int] = frozenset()
    # Exposure in units of L / scale, for every vertex that received at least one hit
    _exposure_units: Dict[int, int] = field(default_factory=dict, repr=False)
    _scale: int = field(default=1, repr=False)

    @property
    def terminal_size(self) -> int:
        return len(self.terminal_set)

    def exposure(self, v: int) -> Fraction:
        """Exact cumulative exposure received by v from defaulted senders"""
        return self.balance_sheet.L * Fraction(self._exposure_units.get(v, 0), self._scale)

    def default_round(self, v: int) -> Optional[int]:
        if v in self.initial_shock:
            return 0
        for t, delta in enumerate(self.rounds, start=1):
            if v in delta:
                return t
        return None

    def to_dict(self) -> dict:
        return {
            'shock': sorted(self.initial_shock),
            'rounds': [list(delta) for delta in self.rounds],
            'terminal_size': self.terminal_size,
            'multi_hit_ids': sorted(self.multi_hit_defaults),
            'round_double_hits': self.round_double_hit_count,
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def run_cascade(g: DiGraph, bs: BalanceSheet, shock: Iterable[int],
                order_rng: Optional[np.random.Generator] = None) -> CascadeTrace:
    """Runs the synchronous cascade from shock to its fixed point.

    v joins in round t+1 iff v has not defaulted and the exposure summed over ALL vertices defaulted by
    round t (cumulative across rounds) is at least E. Exposures are held as integers in units of
    L / lcm(out-degrees), so the comparison with E is exact.

    :param g: exposure network, u->v meaning v is exposed to u
    :param bs: shared balance sheet
    :param shock: initially defaulted vertices, non-empty
    :param order_rng: if given, shuffles the processing order inside each round
    :return: CascadeTrace with hit classification filled in
    """

    shock = sorted(set(int(v) for v in shock))
    if not shock:
        raise ValueError('Shock set must be non-empty')
    if shock[0] < 0 or shock[-1] >= g.n:
        raise ValueError('Shock vertex out of range [0, {}): {}'.format(g.n, shock[0] if shock[0] < 0 else shock[-1]))

    degrees = g.out_degrees
    present = np.unique(degrees[degrees > 0]).tolist()
    scale = math.lcm(*present) if present else 1
    weight = {d: scale // d for d in present}
    # acc >= E * scale / L  <=>  acc * den >= num
    threshold = Fraction(scale) / (bs.C - 1)
    num, den = threshold.numerator, threshold.denominator

    defaulted = set(shock)
    acc: Dict[int, int] = {}
    hits: Dict[int, List[Hit]] = {}
    rounds = []
    double_hits = 0

    frontier = list(shock)
    t = 0
    while frontier:
        t += 1
        if order_rng is not None:
            frontier = [frontier[i] for i in order_rng.permutation(len(frontier))]

        touched: Dict[int, List[int]] = {}
        for u in frontier:
            d = int(degrees[u])
            if d == 0:
                continue
            w = weight[d]
            for v in g.out_adj(u).tolist():
                if v in defaulted:
                    continue
                acc[v] = acc.get(v, 0) + w
                touched.setdefault(v, []).append(u)

        delta = []
        for v, senders in touched.items():
            hits.setdefault(v, []).append((t, tuple(sorted(senders))))
            if len(senders) >= 2:
                double_hits += 1
            if acc[v] * den >= num:
                delta.append(v)

        delta.sort()
        defaulted.update(delta)
        if delta:
            rounds.append(tuple(delta))
        frontier = delta

    terminal = frozenset(defaulted)
    trace = CascadeTrace(n=g.n, edge_count=g.edge_count, balance_sheet=bs, initial_shock=frozenset(shock),
                         rounds=rounds, terminal_set=terminal,
                         hit_profile={v: h for v, h in hits.items() if v in terminal},
                         round_double_hit_count=double_hits, _exposure_units=acc, _scale=scale)
    trace.multi_hit_defaults = frozenset(_split_hits(trace, degrees, bs)[1])

    return trace


def classify_hits(trace: CascadeTrace, g: DiGraph,
                  bs: BalanceSheet) -> Tuple[FrozenSet[int], FrozenSet[int], int]:
    """Splits the non-shock defaults into single-hit and multi-hit.

    A default is single-hit when one of the senders that hit it before it defaulted is active
    (1 <= d_out <= d_star), so that edge alone meets equity. Every other default needed accumulation,
    within a round or across rounds.

    Active in-neighbors that default only after v do not count for v. With this rule an empty multi-hit
    set means the terminal set equals the single-hit reach of the shock.

    :return: (single_hit_set, multi_hit_set, round_double_hit_count)
    """

    if trace.n != g.n or trace.edge_count != g.edge_count:
        raise ValueError('Trace was produced on a different graph ({} vertices, {} edges) than the one given '
                         '({} vertices, {} edges)'.format(trace.n, trace.edge_count, g.n, g.edge_count))

    single, multi = _split_hits(trace, g.out_degrees, bs)

    return frozenset(single), frozenset(multi), trace.round_double_hit_count


def is_systemic(trace: CascadeTrace, epsilon, n: int) -> bool:
    """True iff the terminal default set has at least ceil(epsilon * n) vertices"""
    eps = parse_rational(epsilon, 'epsilon')
    if not 0 < eps < 1:
        raise ValueError('epsilon must lie in (0, 1), got {}'.format(epsilon))

    return trace.terminal_size >= math.ceil(eps * n)


# Helper methods----------------------------------------------------------
def _split_hits(trace: CascadeTrace, degrees: np.ndarray, bs: BalanceSheet):
    single, multi = set(), set()

    for v in trace.terminal_set - trace.initial_shock:
        senders = (u for _, group in trace.hit_profile.get(v, []) for u in group)
        if any(1 <= degrees[u] <= bs.d_star for u in senders):
            single.add(v)
        else:
            multi.add(v)

    return single, multi
