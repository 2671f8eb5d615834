# desc: Experiment configuration - what to simulate, at which sizes, how often, from which seed
# Loaded from YAML or JSON; unknown keys are rejected so a typo cannot silently change an experiment
# ----------------------------------------------------------------------------
from dataclasses import dataclass, field, fields, asdict
from fractions import Fraction
from typing import List, Optional
from lib.analytics import shock_size
from lib.balancesheet import BalanceSheet, parse_rational
import yaml

MODES = ('cascade', 'reach_scaling', 'bowtie', 'identification', 'nonmono_demo')

# Config file keys that differ from the attribute names
_ALIASES = {'lambda': 'lam'}


class ConfigError(ValueError):

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__('{}: {}'.format(field_name, message))


@dataclass
class ExperimentConfig:
    n_list: List[int]
    lam: float
    C: Fraction
    L: Fraction = Fraction(1)
    c_shock: float = 1.0
    epsilon: float = 0.01
    trials: int = 100
    master_seed: int = 0
    mode: str = 'cascade'
    workers: int = 1
    identification_graphs: int = 200
    bowtie_samples: int = 100
    # Cutoff used for the i.i.d.-outdegree sample in identification runs; None means the matched d_star
    alt_d_star: Optional[int] = None
    trial_log: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        self.validate()

    @classmethod
    def from_dict(cls, raw: dict) -> 'ExperimentConfig':
        if not isinstance(raw, dict):
            raise ConfigError('config', 'expected a mapping of fields, got {}'.format(type(raw).__name__))

        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in raw.items():
            name = _ALIASES.get(key, key)
            if key in _ALIASES.values() or name not in known:
                raise ConfigError(key, 'unknown config key')
            kwargs[name] = value

        for required in ('n_list', 'lam', 'C'):
            if required not in kwargs:
                raise ConfigError({'lam': 'lambda'}.get(required, required), 'missing required field')

        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> 'ExperimentConfig':
        """Reads a YAML file; JSON is valid YAML, so JSON config files load the same way"""
        with open(path) as f:
            return cls.from_dict(yaml.safe_load(f))

    def validate(self):
        if isinstance(self.n_list, int):
            self.n_list = [self.n_list]
        if not self.n_list or any(not _is_int(n) or n < 2 for n in self.n_list):
            raise ConfigError('n_list', 'needs a non-empty list of integers >= 2, got {!r}'.format(self.n_list))
        self.n_list = [int(n) for n in self.n_list]

        for name in ('C', 'L'):
            try:
                setattr(self, name, parse_rational(getattr(self, name), name))
            except ValueError as e:
                raise ConfigError(name, str(e))
        if self.C <= 1:
            raise ConfigError('C', 'leverage must exceed 1, got {}'.format(self.C))
        if self.L <= 0:
            raise ConfigError('L', 'liabilities must be positive, got {}'.format(self.L))

        if not _is_number(self.lam) or self.lam <= 0:
            raise ConfigError('lambda', 'must be a positive number, got {!r}'.format(self.lam))
        if any(self.lam >= n for n in self.n_list):
            raise ConfigError('lambda', 'must be below every n in n_list, got {}'.format(self.lam))
        if not _is_number(self.epsilon) or not 0 < self.epsilon < 1:
            raise ConfigError('epsilon', 'must lie in (0, 1), got {!r}'.format(self.epsilon))
        if not _is_number(self.c_shock) or self.c_shock <= 0:
            raise ConfigError('c_shock', 'must be positive, got {!r}'.format(self.c_shock))
        for n in self.n_list:
            try:
                shock_size(n, self.c_shock)
            except ValueError as e:
                raise ConfigError('c_shock', str(e))

        for name in ('trials', 'workers', 'identification_graphs', 'bowtie_samples'):
            value = getattr(self, name)
            if not _is_int(value) or value < 1:
                raise ConfigError(name, 'must be a positive integer, got {!r}'.format(value))
        if not _is_int(self.master_seed) or not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError('master_seed', 'must be a 64-bit unsigned integer, got {!r}'.format(self.master_seed))
        if self.alt_d_star is not None and (not _is_int(self.alt_d_star) or self.alt_d_star < 0):
            raise ConfigError('alt_d_star', 'must be a non-negative integer, got {!r}'.format(self.alt_d_star))
        if self.mode not in MODES:
            raise ConfigError('mode', 'must be one of {}, got {!r}'.format(', '.join(MODES), self.mode))

        self.lam = float(self.lam)
        self.epsilon = float(self.epsilon)
        self.c_shock = float(self.c_shock)

    # Derived quantities------------------------------------------------------
    @property
    def balance_sheet(self) -> BalanceSheet:
        return BalanceSheet(self.C, self.L)

    @property
    def d_star(self) -> int:
        return self.balance_sheet.d_star

    def shock_size(self, n: int) -> int:
        return shock_size(n, self.c_shock)

    def replace(self, **changes) -> 'ExperimentConfig':
        values = asdict(self)
        values.update(changes)
        return ExperimentConfig(**values)

    def to_dict(self) -> dict:
        values = asdict(self)
        values['lambda'] = values.pop('lam')
        values['C'] = str(self.C)
        values['L'] = str(self.L)
        return values


# Helper methods----------------------------------------------------------
def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)
