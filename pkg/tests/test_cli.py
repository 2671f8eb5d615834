from lib.cli import main
from lib.experiment.stats import CSV_COLUMNS
from lib.graph.digraph import DiGraph
import pandas as pd
import json


def test_rho(capsys):
    assert main(['rho', '--lambda', '2', '--C', '5/2']) == 0
    out = capsys.readouterr().out
    assert 'd_star=1' in out
    assert 'rho_out=0.270671' in out
    assert 'regime=subcritical' in out


def test_generate_then_cascade(tmp_path, capsys):
    graph = tmp_path / 'g.csv'
    trace = tmp_path / 'trace.json'
    assert main(['generate', '--n', '200', '--lambda', '2', '--seed', '5', '--out', str(graph)]) == 0

    g = DiGraph.from_csv(graph, n=200)
    assert g.n == 200
    assert main(['cascade', '--graph', str(graph), '--n', '200', '--C', '5/2', '--shock', '0,1,2',
                 '--trace', str(trace)]) == 0

    result = json.loads(trace.read_text())
    assert result['shock'] == [0, 1, 2]
    assert result['terminal_size'] >= 3
    assert result['terminal_size'] == 3 + sum(len(delta) for delta in result['rounds'])


def test_cascade_with_random_shock(tmp_path, capsys):
    graph = tmp_path / 'g.csv'
    main(['generate', '--n', '100', '--lambda', '2', '--out', str(graph)])
    capsys.readouterr()

    assert main(['cascade', '--graph', str(graph), '--n', '100', '--C', '2.5', '--shock-c', '1']) == 0
    result = json.loads(capsys.readouterr().out)
    assert len(result['shock']) == 5


def test_bowtie(tmp_path):
    graph = tmp_path / 'cycle.csv'
    out = tmp_path / 'bowtie.json'
    DiGraph.from_edges(4, [(0, 1), (1, 2), (2, 0), (3, 0)]).to_csv(graph)

    assert main(['bowtie', '--graph', str(graph), '--C', '5/2', '--out', str(out)]) == 0
    summary = json.loads(out.read_text())
    assert summary['scc_size'] == 3
    assert summary['in_size'] == 4
    assert summary['out_size'] == 3


def test_sweep_writes_table(tmp_path):
    config = tmp_path / 'sweep.json'
    out = tmp_path / 'results.csv'
    config.write_text(json.dumps({'n_list': [100], 'lambda': 2, 'C': '5/2', 'epsilon': 0.5, 'trials': 20,
                                  'master_seed': 42}))

    assert main(['sweep', '--config', str(config), '--out', str(out)]) == 0
    first = out.read_text()
    table = pd.read_csv(out)
    assert list(table.columns) == CSV_COLUMNS
    assert table['trials'].tolist() == [20]

    assert main(['sweep', '--config', str(config), '--out', str(out), '--workers', '2']) == 0
    assert out.read_text() == first


def test_validate(capsys):
    assert main(['validate', '--instances', '50', '--seed', '1']) == 0
    out = capsys.readouterr().out
    assert out.count('PASS') == 6
    assert 'FAIL' not in out


def test_nonmono(capsys):
    assert main(['nonmono']) == 0
    assert json.loads(capsys.readouterr().out)['sizes'] == [2, 1]


def test_invalid_input_exits_with_error(capsys, tmp_path):
    assert main(['rho', '--lambda', '2', '--C', '1']) == 2
    assert 'error:' in capsys.readouterr().err

    config = tmp_path / 'bad.yml'
    config.write_text('n_list: [100]\nlambda: 2\nC: 5/2\nlamda: 3\n')
    assert main(['sweep', '--config', str(config), '--out', str(tmp_path / 'x.csv')]) == 2
    assert 'lamda' in capsys.readouterr().err


def test_rho_large_lambda(capsys):
    assert main(['rho', '--lambda', '800', '--C', '2001']) == 0
    out = capsys.readouterr().out
    assert 'd_star=2000' in out
    assert 'rho_out=800.000000' in out
    assert 'regime=supercritical' in out
