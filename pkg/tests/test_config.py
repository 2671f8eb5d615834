from fractions import Fraction
from lib.experiment.config import ConfigError, ExperimentConfig
from lib.experiment.stats import TrialStats, wilson_interval
import pandas as pd
import pytest
import json


def _base(**changes):
    raw = {'n_list': [100, 1000], 'lambda': 2.0, 'C': '5/2', 'c_shock': 1.0, 'epsilon': 0.5, 'trials': 10,
           'master_seed': 42, 'mode': 'cascade'}
    raw.update(changes)
    return raw


def test_from_dict_parses_rationals():
    cfg = ExperimentConfig.from_dict(_base(C='2.5', L='3/2'))
    assert cfg.C == Fraction(5, 2)
    assert cfg.L == Fraction(3, 2)
    assert cfg.lam == 2.0
    assert cfg.d_star == 1
    assert cfg.shock_size(1000) == 7


def test_defaults():
    cfg = ExperimentConfig.from_dict({'n_list': [50], 'lambda': 1, 'C': 4})
    assert cfg.L == 1
    assert cfg.workers == 1
    assert cfg.mode == 'cascade'


@pytest.mark.parametrize('key', ['lamda', 'lam', 'seed', 'Trials'])
def test_unknown_key_names_the_field(key):
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_dict(_base(**{key: 1}))
    assert err.value.field == key


def test_missing_required_field():
    raw = _base()
    del raw['lambda']
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_dict(raw)
    assert err.value.field == 'lambda'


@pytest.mark.parametrize('changes, field', [
    ({'epsilon': 1.0}, 'epsilon'),
    ({'epsilon': 0}, 'epsilon'),
    ({'trials': 0}, 'trials'),
    ({'C': '1'}, 'C'),
    ({'C': 'abc'}, 'C'),
    ({'lambda': 100.0}, 'lambda'),
    ({'n_list': [2], 'lambda': 1.0, 'c_shock': 10.0}, 'c_shock'),
    ({'mode': 'adversarial'}, 'mode'),
    ({'n_list': []}, 'n_list'),
    ({'master_seed': -1}, 'master_seed'),
    ({'workers': 0}, 'workers'),
])
def test_invalid_values_name_the_field(changes, field):
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_dict(_base(**changes))
    assert err.value.field == field


def test_json_and_yaml_files_load_the_same(tmp_path):
    json_path = tmp_path / 'cfg.json'
    json_path.write_text(json.dumps(_base()))
    yaml_path = tmp_path / 'cfg.yml'
    yaml_path.write_text('n_list: [100, 1000]\nlambda: 2.0\nC: 5/2\nc_shock: 1.0\nepsilon: 0.5\ntrials: 10\n'
                         'master_seed: 42\nmode: cascade\n')
    assert ExperimentConfig.from_file(json_path) == ExperimentConfig.from_file(yaml_path)


def test_replace_revalidates():
    cfg = ExperimentConfig.from_dict(_base())
    assert cfg.replace(workers=4).workers == 4
    with pytest.raises(ConfigError):
        cfg.replace(trials=0)


def test_to_dict_round_trips():
    cfg = ExperimentConfig.from_dict(_base())
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


def test_wilson_interval_degenerate_counts():
    lo, hi = wilson_interval(0, 200)
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hi < 0.02
    lo, hi = wilson_interval(200, 200)
    assert hi == pytest.approx(1.0)
    assert lo > 0.98


def test_trial_stats_bounds():
    records = pd.DataFrame({'systemic': [1, 0, 1, 1], 'd_inf': [5, 3, 9, 7], 'reach': [5, 3, 8, 7],
                            'multi_hit': [0, 0, 1, 0], 'double_hits': [0, 0, 2, 0], 'bound': [0.1, 0.0, 0.3, 0.2]})
    stats = TrialStats.from_records(records, n=50, lam=2.0, C=Fraction(4), c_shock=1.0, epsilon=0.1, seed=1,
                                    rho_out=1.35)
    assert stats.systemic_count == 3
    assert 0 <= stats.ci_lo <= stats.p_hat == 0.75 <= stats.ci_hi <= 1
    assert stats.max_Dinf == 9
    assert stats.multi_hit_trial_frac == 0.25
    assert stats.double_hit_trial_frac == 0.25
    assert stats.mean_bound == pytest.approx(0.15)
    # ddof=0 std of the bounds is sqrt(0.0125); three standard errors over four trials
    assert stats.bound_ceiling() == pytest.approx(0.15 + 3 * 0.0125 ** 0.5 / 2)
    assert stats.bound_ceiling(sigmas=0) == pytest.approx(0.15)
