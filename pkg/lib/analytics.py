# desc: Closed-form branching quantities, a Galton-Watson progeny simulator and the multi-hit bound
# These are the analytic yardsticks the simulated cascades are checked against
# ----------------------------------------------------------------------------
from dataclasses import dataclass, field
from typing import Sequence
from lib.graph.degree import DegreeLaw
from scipy import special, stats
import numpy as np
import pandas as pd
import math


def poisson_cdf(lam: float, k: int) -> float:
    """P(Poisson(lam) <= k); 0 for k < 0.

    Summed in log space, so e^-lam never underflows on its own even for lam in the thousands.
    """

    if lam < 0:
        raise ValueError('Poisson mean must be non-negative, got {}'.format(lam))
    if k < 0:
        return 0.0

    log_total = special.logsumexp(stats.poisson.logpmf(np.arange(k + 1), lam))

    return float(min(math.exp(log_total), 1.0))


def rho_out(lam: float, d_star: int) -> float:
    """Branching mean of forward exploration in the single-hit graph: E[D 1{D <= d_star}] with D ~ Poisson(lam),
    which equals lam * P(D <= d_star - 1)"""

    if lam <= 0:
        raise ValueError('lambda must be positive, got {}'.format(lam))

    return lam * poisson_cdf(lam, d_star - 1)


@dataclass(frozen=True)
class BranchingParams:
    lam: float
    d_star: int
    rho_out: float = field(init=False)

    def __post_init__(self):
        if self.d_star < 0:
            raise ValueError('d_star must be non-negative, got {}'.format(self.d_star))
        object.__setattr__(self, 'rho_out', rho_out(self.lam, self.d_star))

    @property
    def regime(self) -> str:
        if self.rho_out < 1:
            return 'subcritical'
        if self.rho_out > 1:
            return 'supercritical'
        return 'critical'


def gw_total_progeny(offspring: DegreeLaw, initial: int, cap: int, rng: np.random.Generator) -> int:
    """Total population of a Galton-Watson process started from initial particles, counting the initial ones.
    Stops as soon as the total reaches cap and then returns cap.

    Only generation sizes are tracked, no tree.
    """

    if initial < 1:
        raise ValueError('GW process needs at least one initial particle, got {}'.format(initial))
    if cap < initial:
        raise ValueError('cap ({}) must be at least the initial count ({})'.format(cap, initial))

    total = alive = int(initial)
    while alive and total < cap:
        alive = int(offspring.sample(alive, rng).sum())
        total += alive

    return min(total, cap)


def multi_hit_bound(lam: float, delta_sizes: Sequence[int], n: int) -> float:
    """Union bound on any round delivering two or more hits to the same vertex: min(1, sum lam^2 |delta_t|^2 / n)"""

    if n < 1:
        raise ValueError('n must be positive, got {}'.format(n))

    return min(1.0, sum(lam * lam * size * size for size in delta_sizes) / n)


def shock_size(n: int, c: float) -> int:
    """k_n = ceil(c ln n). The log is natural; another base only rescales c."""

    if n < 2:
        raise ValueError('shock_size needs n >= 2, got {}'.format(n))
    if c <= 0:
        raise ValueError('shock constant c must be positive, got {}'.format(c))

    k = math.ceil(c * math.log(n))
    if k > n:
        raise ValueError('Shock size k_n = {} exceeds n = {} for c = {}'.format(k, n, c))

    return k


def gw_domination_check(reach_sizes: Sequence[int], progeny_sizes: Sequence[int], sigmas: float = 3.0) -> pd.DataFrame:
    """Compares the tails of two samples at every integer threshold m: the reach sample is dominated if
    P(reach >= m) <= P(progeny >= m) + sigmas * (standard error of the difference).

    :return: Dataframe with one row per threshold m and a boolean 'passed' column
    """

    reach = np.asarray(reach_sizes)
    progeny = np.asarray(progeny_sizes)
    top = int(max(reach.max(initial=0), progeny.max(initial=0)))
    thresholds = np.arange(1, top + 1)

    p_reach = _tail(reach, thresholds)
    p_gw = _tail(progeny, thresholds)
    slack = sigmas * np.sqrt(p_reach * (1 - p_reach) / reach.size + p_gw * (1 - p_gw) / progeny.size)

    return pd.DataFrame({'m': thresholds, 'p_reach': p_reach, 'p_progeny': p_gw, 'slack': slack,
                         'passed': p_reach <= p_gw + slack})


# Helper methods----------------------------------------------------------
def _tail(sample: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    # Empirical P(X >= m) for each m
    ordered = np.sort(sample)
    return (ordered.size - np.searchsorted(ordered, thresholds, side='left')) / ordered.size
