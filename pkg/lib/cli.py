# desc: Command line entry point - python -m lib.cli <subcommand>
# ----------------------------------------------------------------------------
from typing import List, Optional
from lib.analytics import BranchingParams, shock_size
from lib.balancesheet import BalanceSheet, parse_rational
from lib.bowtie import bowtie_extract
from lib.cascade import run_cascade
from lib.experiment.config import ExperimentConfig
from lib.graph.digraph import DiGraph
from lib.graph.generate import gen_gnp_digraph
from lib.oracle import run_validation
from lib.shcontagion import SHContagion, sample_shock
from lib.singlehit import build_single_hit
import numpy as np
import argparse
import json
import logging
import sys

# Fixed float formatting keeps reruns of a sweep byte-identical
FLOAT_FORMAT = '%.10g'


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='shcontagion', description='Balance-sheet contagion on sparse random digraphs')
    parser.add_argument('-v', '--verbose', action='store_true', help='Log per-trial detail.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('generate', help='Draw G(n, lambda/n) and write its edge list.')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--lambda', dest='lam', type=float, required=True)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True)

    p = sub.add_parser('cascade', help='Run one cascade on an edge-list graph and write its trace.')
    p.add_argument('--graph', required=True)
    p.add_argument('--n', type=int, default=None, help='Vertex count, if larger than the ids in the edge list.')
    p.add_argument('--C', required=True, help='Leverage as p/q or decimal.')
    p.add_argument('--L', default='1', help='Liabilities as p/q or decimal.')
    shock = p.add_mutually_exclusive_group(required=True)
    shock.add_argument('--shock', help='Comma-separated shocked vertex ids.')
    shock.add_argument('--shock-c', type=float, help='Draw a uniform shock of size ceil(c ln n).')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--trace', default=None, help='Trace JSON path; stdout if omitted.')

    p = sub.add_parser('sweep', help='Run the experiment described by a config file.')
    p.add_argument('--config', required=True)
    p.add_argument('--out', required=True)
    p.add_argument('--workers', type=int, default=None, help='Override the config worker count.')
    p.add_argument('--trial-log', default=None, help='Append-only per-trial log used to resume runs.')

    p = sub.add_parser('bowtie', help='Bow-tie summary of the single-hit graph of an edge-list graph.')
    p.add_argument('--graph', required=True)
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--C', required=True)
    p.add_argument('--out', default=None)

    p = sub.add_parser('rho', help='Print d_star, rho_out and the regime.')
    p.add_argument('--lambda', dest='lam', type=float, required=True)
    p.add_argument('--C', required=True)

    p = sub.add_parser('validate', help='Run the small-n brute-force oracle suite.')
    p.add_argument('--instances', type=int, default=1000)
    p.add_argument('--seed', type=int, default=0)

    p = sub.add_parser('nonmono', help='Show that adding an edge can shrink the cascade.')
    p.add_argument('--C', default='5/2')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')

    try:
        return COMMANDS[args.command](args)
    except ValueError as e:
        print('error: {}'.format(e), file=sys.stderr)
        return 2


# Subcommands-------------------------------------------------------------
def _generate(args) -> int:
    g = gen_gnp_digraph(args.n, args.lam, np.random.default_rng(args.seed))
    g.to_csv(args.out)
    print('{} -> {}'.format(g, args.out))
    return 0


def _cascade(args) -> int:
    g = DiGraph.from_csv(args.graph, n=args.n)
    bs = BalanceSheet(parse_rational(args.C, 'C'), parse_rational(args.L, 'L'))

    if args.shock is not None:
        shock = [int(v) for v in args.shock.split(',') if v.strip()]
    else:
        shock = sample_shock(g.n, shock_size(g.n, args.shock_c), np.random.default_rng(args.seed))

    _write(run_cascade(g, bs, shock).to_json(indent=2), args.trace)
    return 0


def _sweep(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    overrides = {}
    if args.workers is not None:
        overrides['workers'] = args.workers
    if args.trial_log is not None:
        overrides['trial_log'] = args.trial_log
    if overrides:
        cfg = cfg.replace(**overrides)

    table = SHContagion(cfg).run()
    table.to_csv(args.out, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    print('{} rows -> {}'.format(len(table), args.out))
    return 0


def _bowtie(args) -> int:
    g = DiGraph.from_csv(args.graph, n=args.n)
    bs = BalanceSheet(parse_rational(args.C, 'C'))
    _write(bowtie_extract(build_single_hit(g, bs.d_star)).to_json(indent=2), args.out)
    return 0


def _rho(args) -> int:
    bs = BalanceSheet(parse_rational(args.C, 'C'))
    params = BranchingParams(args.lam, bs.d_star)
    print('d_star={} rho_out={:.6f} regime={}'.format(params.d_star, params.rho_out, params.regime))
    return 0


def _validate(args) -> int:
    report = run_validation(instances=args.instances, seed=args.seed)
    for _, row in report.iterrows():
        print('{}  {} ({} checked, {} failed)'.format('PASS' if row['passed'] else 'FAIL', row['property'],
                                                      row['checked'], row['failed']))
    return 0 if report['passed'].all() else 1


def _nonmono(args) -> int:
    report = SHContagion.nonmono_demo(parse_rational(args.C, 'C'))
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def _write(text: str, path: Optional[str]):
    if path is None:
        print(text)
        return
    with open(path, 'w') as f:
        f.write(text + '\n')


COMMANDS = {
    'generate': _generate,
    'cascade': _cascade,
    'sweep': _sweep,
    'bowtie': _bowtie,
    'rho': _rho,
    'validate': _validate,
    'nonmono': _nonmono,
}


if __name__ == '__main__':
    sys.exit(main())
