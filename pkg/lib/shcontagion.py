# desc: This class orchestrates the Monte Carlo experiments on balance-sheet contagion
# Every trial draws a fresh G(n, lambda/n) and an independent uniform shock from its own seeded streams
# ----------------------------------------------------------------------------
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool
from typing import Dict, List, Tuple
from lib.analytics import multi_hit_bound, rho_out, shock_size
from lib.balancesheet import BalanceSheet
from lib.bowtie import bowtie_extract
from lib.cascade import CascadeTrace, classify_hits, is_systemic, run_cascade
from lib.experiment.config import ExperimentConfig
from lib.experiment.stats import TrialStats, to_frame
from lib.graph.digraph import DiGraph
from lib.graph.generate import gen_gnp_digraph, gen_iid_outdegree_digraph
from lib.singlehit import build_single_hit, forward_reach, truncated_outdegree_sampler
from scipy import stats
import numpy as np
import pandas as pd
import logging
import os
import time
import warnings

logger = logging.getLogger(__name__)

# Columns identifying which experiment a logged trial belongs to
_LOG_KEY = ['n', 'lambda', 'C', 'L', 'c_shock', 'epsilon', 'seed']
_LOG_COLUMNS = _LOG_KEY + ['trial', 'k', 'systemic', 'd_inf', 'reach', 'multi_hit', 'double_hits', 'rounds', 'bound']


class InvariantViolation(AssertionError):
    pass


def trial_streams(master_seed: int, n: int, trial: int, streams: int = 2) -> List[np.random.Generator]:
    """Independent generators for one trial, a pure function of (master_seed, n, trial)"""
    root = np.random.SeedSequence(master_seed, spawn_key=(n, trial))
    return [np.random.default_rng(child) for child in root.spawn(streams)]


def sample_shock(n: int, k: int, rng: np.random.Generator) -> List[int]:
    """Uniform k-subset of range(n) by a partial Fisher-Yates shuffle that only touches k positions"""

    if not 0 <= k <= n:
        raise ValueError('Cannot draw {} distinct vertices out of {}'.format(k, n))

    swapped = {}
    chosen = []
    for i in range(k):
        j = int(rng.integers(i, n))
        chosen.append(swapped.get(j, j))
        swapped[j] = swapped.get(i, i)

    return chosen


@dataclass
class ScalingFit:
    """Max reach per n against (ln n)^2, fitted through the origin"""
    table: pd.DataFrame
    m_hat: float

    @property
    def in_band(self) -> bool:
        # Every ratio within a factor 2 of the fitted coefficient
        return bool(self.table['in_band'].all())


@dataclass
class NonmonoReport:
    C: Fraction
    before: CascadeTrace
    after: CascadeTrace

    @property
    def sizes(self) -> Tuple[int, int]:
        return self.before.terminal_size, self.after.terminal_size

    def to_dict(self) -> dict:
        return {'C': str(self.C), 'before': self.before.to_dict(), 'after': self.after.to_dict(),
                'sizes': list(self.sizes)}


class SHContagion:

    def __init__(self, cfg: ExperimentConfig):
        """Runs the experiments described by cfg; results are deterministic given cfg.master_seed no matter
        how many workers are used"""

        self.cfg = cfg
        self.bs = cfg.balance_sheet
        self.rho_out = rho_out(cfg.lam, self.bs.d_star)

    def run(self) -> pd.DataFrame:
        """Runs the experiment named by cfg.mode and returns its table"""

        if self.cfg.mode == 'cascade':
            return to_frame(self.run_trials().values())
        if self.cfg.mode == 'reach_scaling':
            return self.reach_scaling_experiment().table
        if self.cfg.mode == 'bowtie':
            return self.bowtie_experiment()
        if self.cfg.mode == 'identification':
            return self.identification_experiment()

        report = self.nonmono_demo(self.cfg.C, self.cfg.L)
        return pd.DataFrame([{'C': str(report.C), 'before': report.sizes[0], 'after': report.sizes[1]}])

    # Random-shock cascades---------------------------------------------------
    def run_trials(self) -> Dict[int, TrialStats]:
        """For each n, runs cfg.trials independent (graph, shock) draws and aggregates them

        :return: dict mapping n to its TrialStats
        """

        results = {}
        for n in self.cfg.n_list:
            start = time.time()
            records = self.trial_records(n)
            elapsed = time.time() - start

            results[n] = TrialStats.from_records(records, n=n, lam=self.cfg.lam, C=self.cfg.C,
                                                 c_shock=self.cfg.c_shock, epsilon=self.cfg.epsilon,
                                                 seed=self.cfg.master_seed, rho_out=self.rho_out, elapsed=elapsed)
            logger.info('cascade n=%d: %d/%d systemic, max |D_inf|=%d, %.1fs', n, results[n].systemic_count,
                        results[n].trials, results[n].max_Dinf, elapsed)
            if results[n].mean_bound >= 1:
                warnings.warn('Multi-hit union bound is vacuous at n={} (lambda={})'.format(n, self.cfg.lam))
            elif results[n].double_hit_trial_frac > results[n].bound_ceiling():
                warnings.warn('Double-hit trial fraction {:.4f} exceeds the multi-hit bound {:.4f} at n={}'.format(
                    results[n].double_hit_trial_frac, results[n].bound_ceiling(), n))

        return results

    def trial_records(self, n: int) -> pd.DataFrame:
        """One row per trial at size n, ordered by trial index. Trials already in the trial log are read back."""

        cfg = self.cfg
        key = {'n': n, 'lambda': cfg.lam, 'C': str(cfg.C), 'L': str(cfg.L), 'c_shock': cfg.c_shock,
               'epsilon': cfg.epsilon, 'seed': cfg.master_seed}

        logged = self._read_log(key)
        done = set(logged['trial'].tolist()) if len(logged) else set()
        jobs = [(key, t) for t in range(cfg.trials) if t not in done]

        fresh = pd.DataFrame(self._map(_cascade_trial, jobs), columns=_LOG_COLUMNS)
        if cfg.trial_log and len(fresh):
            exists = os.path.exists(cfg.trial_log)
            fresh.to_csv(cfg.trial_log, mode='a', header=not exists, index=False, lineterminator='\n')

        if len(logged) and len(fresh):
            records = pd.concat([logged, fresh])
        else:
            records = logged if len(logged) else fresh
        records = records[records['trial'] < cfg.trials].sort_values('trial').reset_index(drop=True)

        return records

    # Subcritical reach scaling-----------------------------------------------
    def reach_scaling_experiment(self) -> ScalingFit:
        """Max single-hit reach and max terminal default set per n, with max reach fitted as M (ln n)^2"""

        if self.rho_out >= 1:
            raise ValueError('Reach scaling needs subcritical parameters, but rho_out = {:.6f} >= 1 at lambda={}, '
                             'C={}'.format(self.rho_out, self.cfg.lam, self.cfg.C))

        rows = []
        for n in self.cfg.n_list:
            records = self.trial_records(n)
            rows.append({'n': n, 'k_n': self.cfg.shock_size(n), 'max_reach': int(records['reach'].max()),
                         'max_Dinf': int(records['d_inf'].max()), 'ln_n_sq': np.log(n) ** 2})

        table = pd.DataFrame(rows)
        x, y = table['ln_n_sq'].to_numpy(), table['max_reach'].to_numpy()
        m_hat = float(np.dot(x, y) / np.dot(x, x))
        if len(table) == 1:
            warnings.warn('Reach scaling fit over a single n is just the ratio max_reach / (ln n)^2')

        table['ratio'] = y / x
        table['fitted'] = m_hat * x
        table['residual'] = y - table['fitted']
        table['in_band'] = (table['ratio'] >= m_hat / 2) & (table['ratio'] <= 2 * m_hat)

        return ScalingFit(table=table, m_hat=m_hat)

    # Supercritical bow-tie---------------------------------------------------
    def bowtie_experiment(self) -> pd.DataFrame:
        """Bow-tie of the single-hit graph for each (n, trial), with an exact check that sampled IN vertices
        reach the whole OUT set

        :return: Dataframe with one row per (n, trial)
        """

        rows = []
        for n in self.cfg.n_list:
            start = time.time()
            jobs = [(n, self.cfg.lam, self.bs.d_star, self.cfg.master_seed, t, self.cfg.bowtie_samples)
                    for t in range(self.cfg.trials)]
            rows.extend(self._map(_bowtie_trial, jobs))
            logger.info('bowtie n=%d: %d seeds, %.1fs', n, self.cfg.trials, time.time() - start)

        return pd.DataFrame(rows)

    @staticmethod
    def summarize_bowtie(per_seed: pd.DataFrame) -> pd.DataFrame:
        """Mean and sample standard deviation of the three fractions per n"""
        return per_seed.groupby('n')[['in_frac', 'out_frac', 'scc_frac']].agg(['mean', 'std'])

    @staticmethod
    def core_scaling(per_seed: pd.DataFrame) -> pd.DataFrame:
        """Largest strongly connected core per n against ln n; k_hat = max scc_size / ln n is the constant a
        subcritical run reports for |core| <= K ln n"""

        table = per_seed.groupby('n', as_index=False)['scc_size'].max().rename(columns={'scc_size': 'max_scc'})
        table['ln_n'] = np.log(table['n'].to_numpy(dtype=float))
        table['k_hat'] = table['max_scc'] / table['ln_n']
        return table

    def calibrate_epsilon(self) -> float:
        """Half the mean empirical OUT fraction; a systemic threshold safely below the OUT set size"""
        per_seed = self.bowtie_experiment()
        return float(per_seed['out_frac'].mean() / 2)

    # Distributional identification-----------------------------------------
    def identification_experiment(self, level: float = 0.01) -> pd.DataFrame:
        """Compares the single-hit graph of G(n, lambda/n) with an i.i.d.-outdegree digraph whose degrees follow
        the truncated law, on pooled out-degree histograms (chi-square) and on reach from a uniform vertex
        (Kolmogorov-Smirnov)

        :return: Dataframe with one row per n and a boolean 'passed' column
        """

        cfg = self.cfg
        alt = self.bs.d_star if cfg.alt_d_star is None else cfg.alt_d_star
        rows = []

        for n in cfg.n_list:
            truncated = truncated_outdegree_sampler(n, cfg.lam, alt)
            hist_sh = np.zeros(n, dtype=np.int64)
            hist_iid = np.zeros(n, dtype=np.int64)
            reach_sh, reach_iid = [], []

            for i in range(cfg.identification_graphs):
                gnp_rng, iid_rng, source_rng = trial_streams(cfg.master_seed, n, i, streams=3)
                sh = build_single_hit(gen_gnp_digraph(n, cfg.lam, gnp_rng), self.bs.d_star)
                iid = gen_iid_outdegree_digraph(n, truncated, iid_rng)
                sources = source_rng.integers(0, n, size=2)

                hist_sh += np.bincount(sh.out_degrees, minlength=n)
                hist_iid += np.bincount(iid.out_degrees, minlength=n)
                reach_sh.append(len(forward_reach(sh, [int(sources[0])])))
                reach_iid.append(len(forward_reach(iid, [int(sources[1])])))

            table = np.vstack([hist_sh, hist_iid])
            table = table[:, table.sum(axis=0) > 0]
            degree_stat, degree_p, _, _ = stats.chi2_contingency(table)
            reach_test = stats.ks_2samp(reach_sh, reach_iid)

            rows.append({'n': n, 'lambda': cfg.lam, 'd_star': self.bs.d_star, 'alt_d_star': alt,
                         'graphs': cfg.identification_graphs, 'degree_chi2': float(degree_stat),
                         'degree_p': float(degree_p), 'reach_ks': float(reach_test.statistic),
                         'reach_p': float(reach_test.pvalue), 'level': level,
                         'passed': bool(degree_p >= level and reach_test.pvalue >= level)})
            logger.info('identification n=%d: degree p=%.4g, reach p=%.4g', n, degree_p, reach_test.pvalue)

        return pd.DataFrame(rows)

    # Non-monotonicity--------------------------------------------------------
    @staticmethod
    def nonmono_demo(C=Fraction(5, 2), L=Fraction(1)) -> NonmonoReport:
        """Shock u on the graph u->v, then again after adding u->w. Splitting u's liabilities over two
        creditors halves each exposure, which can leave v solvent."""

        bs = BalanceSheet(C, L)
        u, v, w = 0, 1, 2
        before_graph = DiGraph.from_edges(3, [(u, v)])
        after_graph = before_graph.with_edge(u, w)

        return NonmonoReport(C=bs.C, before=run_cascade(before_graph, bs, [u]),
                             after=run_cascade(after_graph, bs, [u]))

    # Helper methods----------------------------------------------------------
    def _map(self, func, jobs: list) -> list:
        # Results come back in job order whatever the worker count
        if self.cfg.workers > 1 and len(jobs) > 1:
            with Pool(self.cfg.workers) as pool:
                return pool.map(func, jobs, chunksize=max(1, len(jobs) // (4 * self.cfg.workers)))
        return [func(job) for job in jobs]

    def _read_log(self, key: dict) -> pd.DataFrame:
        # Logged trials matching key, or an empty frame
        path = self.cfg.trial_log
        if not path or not os.path.exists(path):
            return pd.DataFrame(columns=_LOG_COLUMNS)

        logged = pd.read_csv(path, dtype={'C': str, 'L': str}, float_precision='round_trip')
        if list(logged.columns) != _LOG_COLUMNS:
            warnings.warn('Trial log {} has unexpected columns; ignoring it'.format(path))
            return pd.DataFrame(columns=_LOG_COLUMNS)

        same_params = np.ones(len(logged), dtype=bool)
        for col, value in key.items():
            if col != 'n':
                same_params &= (logged[col] == value).to_numpy()
        if len(logged) and not same_params.any():
            warnings.warn('Trial log {} holds no trials for lambda={} C={} L={} c_shock={} epsilon={} seed={}; '
                          'starting fresh'.format(path, key['lambda'], key['C'], key['L'], key['c_shock'],
                                                  key['epsilon'], key['seed']))

        mask = same_params & (logged['n'] == key['n']).to_numpy()
        return logged[mask].drop_duplicates('trial', keep='first')


# Trial workers; module level so multiprocessing can pickle them
def _cascade_trial(job) -> dict:
    key, trial = job
    n, lam = key['n'], key['lambda']
    bs = BalanceSheet(Fraction(key['C']), Fraction(key['L']))
    k = shock_size(n, key['c_shock'])

    graph_rng, shock_rng = trial_streams(key['seed'], n, trial)
    g = gen_gnp_digraph(n, lam, graph_rng)
    shock = sample_shock(n, k, shock_rng)

    trace = run_cascade(g, bs, shock)
    _, multi, double_hits = classify_hits(trace, g, bs)
    reach = forward_reach(build_single_hit(g, bs.d_star), shock)

    if not reach <= trace.terminal_set:
        raise InvariantViolation('n={} trial={} seed={}: single-hit reach is not contained in the terminal default '
                                 'set'.format(n, trial, key['seed']))
    if not multi and reach != trace.terminal_set:
        raise InvariantViolation('n={} trial={} seed={}: no multi-hit default, yet |D_inf|={} != |reach|={}'.format(
            n, trial, key['seed'], trace.terminal_size, len(reach)))

    logger.debug('n=%d trial=%d: k=%d |D_inf|=%d reach=%d rounds=%d multi_hit=%d', n, trial, k, trace.terminal_size,
                 len(reach), len(trace.rounds), len(multi))

    sizes = [k] + [len(delta) for delta in trace.rounds]
    record = dict(key)
    record.update({'trial': trial, 'k': k, 'systemic': int(is_systemic(trace, key['epsilon'], n)),
                   'd_inf': trace.terminal_size, 'reach': len(reach), 'multi_hit': int(bool(multi)),
                   'double_hits': double_hits, 'rounds': len(trace.rounds),
                   'bound': multi_hit_bound(lam, sizes, n)})

    return record


def _bowtie_trial(job) -> dict:
    n, lam, d_star, seed, trial, samples = job
    graph_rng, sample_rng = trial_streams(seed, n, trial)
    sh = build_single_hit(gen_gnp_digraph(n, lam, graph_rng), d_star)
    bt = bowtie_extract(sh)

    in_vertices = sorted(bt.in_set)
    picks = sample_rng.choice(len(in_vertices), size=min(samples, len(in_vertices)), replace=False)
    superset = all(bt.out_set <= forward_reach(sh, [in_vertices[i]]) for i in picks)

    row = {'n': n, 'trial': trial}
    row.update(bt.summary())
    row.update({'superset_checked': len(picks), 'superset_ok': superset})

    return row


def run_trials(cfg: ExperimentConfig) -> Dict[int, TrialStats]:
    return SHContagion(cfg).run_trials()


def reach_scaling_experiment(cfg: ExperimentConfig) -> ScalingFit:
    return SHContagion(cfg).reach_scaling_experiment()


def identification_experiment(cfg: ExperimentConfig) -> pd.DataFrame:
    return SHContagion(cfg).identification_experiment()


def nonmono_demo(C=Fraction(5, 2)) -> NonmonoReport:
    return SHContagion.nonmono_demo(C)
