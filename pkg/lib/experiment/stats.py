# desc: Per-configuration aggregates of Monte Carlo trials, with Wilson score intervals
# ----------------------------------------------------------------------------
from dataclasses import dataclass, asdict
from typing import Tuple
from scipy import stats
import pandas as pd
import math

# Columns of the sweep CSV, in output order
CSV_COLUMNS = ['n', 'lambda', 'C', 'c_shock', 'epsilon', 'trials', 'systemic_count', 'p_hat', 'ci_lo', 'ci_hi',
               'mean_Dinf', 'max_Dinf', 'mean_reach', 'max_reach', 'multi_hit_trial_frac', 'rho_out', 'seed',
               'double_hit_trial_frac', 'mean_bound']


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval; stays informative when every trial (or none) succeeds"""
    ci = stats.binomtest(successes, trials).proportion_ci(confidence_level=confidence, method='wilson')
    return float(ci.low), float(ci.high)


@dataclass
class TrialStats:
    n: int
    lam: float
    C: str
    c_shock: float
    epsilon: float
    seed: int
    rho_out: float
    trials: int
    systemic_count: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    mean_Dinf: float
    max_Dinf: int
    mean_reach: float
    max_reach: int
    multi_hit_trial_frac: float
    double_hit_trial_frac: float
    mean_bound: float
    bound_std: float
    elapsed: float = 0.0

    @classmethod
    def from_records(cls, records: pd.DataFrame, n: int, lam: float, C, c_shock: float, epsilon: float,
                     seed: int, rho_out: float, elapsed: float = 0.0) -> 'TrialStats':
        """Aggregates per-trial records (one row per trial, columns systemic, d_inf, reach, multi_hit,
        double_hits, bound) for a single n"""

        trials = len(records)
        if trials == 0:
            raise ValueError('Cannot aggregate zero trials for n={}'.format(n))

        systemic = int(records['systemic'].sum())
        ci_lo, ci_hi = wilson_interval(systemic, trials)
        p_hat = systemic / trials

        return cls(n=n, lam=lam, C=str(C), c_shock=c_shock, epsilon=epsilon, seed=seed, rho_out=rho_out,
                   trials=trials, systemic_count=systemic, p_hat=p_hat,
                   ci_lo=max(0.0, min(ci_lo, p_hat)), ci_hi=min(1.0, max(ci_hi, p_hat)),
                   mean_Dinf=float(records['d_inf'].mean()), max_Dinf=int(records['d_inf'].max()),
                   mean_reach=float(records['reach'].mean()), max_reach=int(records['reach'].max()),
                   multi_hit_trial_frac=float(records['multi_hit'].mean()),
                   double_hit_trial_frac=float((records['double_hits'] > 0).mean()),
                   mean_bound=float(records['bound'].mean()),
                   bound_std=float(records['bound'].std(ddof=0)),
                   elapsed=elapsed)

    def bound_ceiling(self, sigmas: float = 3.0) -> float:
        """Mean multi-hit bound plus sigmas standard errors; the observed double-hit trial fraction should not
        exceed it"""
        return self.mean_bound + sigmas * self.bound_std / math.sqrt(self.trials)

    def to_row(self) -> dict:
        row = asdict(self)
        row['lambda'] = row.pop('lam')
        return {col: row[col] for col in CSV_COLUMNS}


def to_frame(all_stats) -> pd.DataFrame:
    """Stacks TrialStats into the sweep table, rows ordered by n"""
    rows = sorted((s.to_row() for s in all_stats), key=lambda row: row['n'])
    return pd.DataFrame(rows, columns=CSV_COLUMNS)
