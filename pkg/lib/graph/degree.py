# desc: Abstract class for out-degree / offspring distributions on {0, 1, ..., max_degree}
# A law exposes exact probabilities for goodness-of-fit checks and vectorized sampling
# ----------------------------------------------------------------------------
from abc import ABC, abstractmethod
from scipy import stats
import numpy as np


class DegreeLaw(ABC):
    @property
    @abstractmethod
    def max_degree(self) -> int:
        # Largest value with positive probability
        pass

    @abstractmethod
    def pmf(self, k: int) -> float:
        # Probability of drawing exactly k
        pass

    @abstractmethod
    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        # Draws size independent values as an int64 array
        pass

    def pmf_vector(self) -> np.ndarray:
        """Probabilities for 0..max_degree as an array"""
        return np.array([self.pmf(k) for k in range(self.max_degree + 1)])

    def mean(self) -> float:
        return float(np.dot(np.arange(self.max_degree + 1), self.pmf_vector()))

    def variance(self) -> float:
        support = np.arange(self.max_degree + 1)
        pmf = self.pmf_vector()
        return float(np.dot(support ** 2, pmf) - np.dot(support, pmf) ** 2)


class ConstantDegree(DegreeLaw):

    def __init__(self, value: int):
        if value < 0:
            raise ValueError('Constant degree must be non-negative, got {}'.format(value))
        self.value = int(value)

    @property
    def max_degree(self) -> int:
        return self.value

    def pmf(self, k: int) -> float:
        return 1.0 if k == self.value else 0.0

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return np.full(size, self.value, dtype=np.int64)

    def __repr__(self):
        return "ConstantDegree(value={})".format(self.value)


class BinomialDegree(DegreeLaw):

    def __init__(self, trials: int, p: float):
        """Binomial(trials, p); Binomial(n-1, lambda/n) is the exact out-degree law of G(n, lambda/n)"""
        if trials < 0 or not 0.0 <= p <= 1.0:
            raise ValueError('Invalid binomial parameters trials={}, p={}'.format(trials, p))
        self.trials = int(trials)
        self.p = float(p)

    @classmethod
    def gnp_outdegree(cls, n: int, lam: float) -> 'BinomialDegree':
        return cls(n - 1, lam / n)

    @property
    def max_degree(self) -> int:
        return self.trials

    def pmf(self, k: int) -> float:
        return float(stats.binom.pmf(k, self.trials, self.p))

    def pmf_vector(self) -> np.ndarray:
        return stats.binom.pmf(np.arange(self.trials + 1), self.trials, self.p)

    def mean(self) -> float:
        return self.trials * self.p

    def variance(self) -> float:
        return self.trials * self.p * (1.0 - self.p)

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return rng.binomial(self.trials, self.p, size=size).astype(np.int64)

    def __repr__(self):
        return "BinomialDegree(trials={}, p={})".format(self.trials, self.p)


class EmpiricalDegree(DegreeLaw):

    def __init__(self, counts):
        """Law proportional to observed counts: counts[k] is how often degree k was seen"""

        counts = np.asarray(counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size == 0 or np.any(counts < 0) or counts.sum() == 0:
            raise ValueError('Empirical degree law needs non-negative counts with a positive total')

        nonzero = np.flatnonzero(counts)
        self.counts = counts[:nonzero[-1] + 1]
        self.probs = self.counts / self.counts.sum()

    @classmethod
    def from_graph(cls, g) -> 'EmpiricalDegree':
        """Out-degree histogram of g"""
        return cls(np.bincount(g.out_degrees, minlength=1))

    @property
    def max_degree(self) -> int:
        return self.counts.size - 1

    def pmf(self, k: int) -> float:
        return float(self.probs[k]) if 0 <= k <= self.max_degree else 0.0

    def pmf_vector(self) -> np.ndarray:
        return self.probs.copy()

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return rng.choice(self.max_degree + 1, size=size, p=self.probs).astype(np.int64)

    def __repr__(self):
        return "EmpiricalDegree(max_degree={}, total={})".format(self.max_degree, int(self.counts.sum()))
