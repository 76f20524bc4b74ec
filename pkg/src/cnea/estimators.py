"""scikit-learn style front end for the five optimisers.

Each estimator takes its hyper-parameters in ``__init__`` (so ``get_params``
/ ``set_params`` / ``clone`` work) and ``fit`` runs one optimisation on an
:class:`~cnea.benchmarks.ObjectiveFunction`::

    >>> from cnea import CounterNichingEA, make_function
    >>> opt = CounterNichingEA(n=50, max_gen=20, random_state=0).fit(make_function("elp", 2))
    >>> opt.record_.trace.shape
    (21, 4)
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .baselines import BaselineParams, run_cea, run_dgea, run_sea, run_socea
from .benchmarks import ObjectiveFunction, evaluate_batch
from .niching import CnParams, counter_niching_ea
from .operators import POW_K_MAX
from .rng import check_rng


class BaseOptimizer(BaseEstimator):
    """Common ``fit`` plumbing; subclasses implement ``_run(fn, rng, seed)``."""

    algorithm = None

    def fit(self, fn, y=None):
        if not isinstance(fn, ObjectiveFunction):
            raise TypeError("fit expects an ObjectiveFunction, see cnea.make_function")
        seed = self.random_state if isinstance(self.random_state, (int, np.integer)) else None
        record = self._run(fn, check_rng(self.random_state), seed)
        self.record_ = record
        self.best_genome_ = record.final_genome
        self.best_error_ = record.final_best_error
        self.n_generations_ = len(record.trace) - 1
        self.function_ = fn
        return self

    def _check_fitted(self):
        if not hasattr(self, "record_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet")

    def predict(self, X):
        """Objective values of the rows of ``X`` on the fitted function."""
        self._check_fitted()
        return evaluate_batch(self.function_, X)

    def score(self, X=None, y=None):
        """Negative final error, so that higher is better."""
        self._check_fitted()
        return -self.best_error_


class CounterNichingEA(BaseOptimizer):
    algorithm = "cnea"

    def __init__(self, n=300, max_gen=500, grid_bins=4, community_frac=0.05,
                 samples_per_community=20, replace_frac=0.5, pm=0.01, pr=0.9, elite_k=None,
                 mutation_variance=1.0, final_variance=1e-8, cooling_start=0.5,
                 mutation_mode="per_gene", crossover="blend", random_state=None):
        self.n = n
        self.max_gen = max_gen
        self.grid_bins = grid_bins
        self.community_frac = community_frac
        self.samples_per_community = samples_per_community
        self.replace_frac = replace_frac
        self.pm = pm
        self.pr = pr
        self.elite_k = elite_k
        self.mutation_variance = mutation_variance
        self.final_variance = final_variance
        self.cooling_start = cooling_start
        self.mutation_mode = mutation_mode
        self.crossover = crossover
        self.random_state = random_state

    def cn_params(self):
        return CnParams(g=self.grid_bins, rho=self.community_frac, s=self.samples_per_community,
                        replace_frac=self.replace_frac, pm=self.pm, pr=self.pr,
                        elite_k=self.elite_k, mutation_variance=self.mutation_variance,
                        final_variance=self.final_variance, cooling_start=self.cooling_start,
                        mutation_mode=self.mutation_mode, crossover=self.crossover)

    def _run(self, fn, rng, seed):
        return counter_niching_ea(fn, self.cn_params(), self.n, self.max_gen, rng, seed)


class _Baseline(BaseOptimizer):
    _runner = None

    def baseline_params(self):
        fields = set(BaselineParams.__dataclass_fields__)
        return BaselineParams(**{k: v for k, v in self.get_params().items() if k in fields})

    def _run(self, fn, rng, seed):
        return type(self)._runner(fn, self.baseline_params(), self.max_gen, rng, seed)


class StandardEA(_Baseline):
    algorithm = "sea"
    _runner = staticmethod(run_sea)

    def __init__(self, n=400, max_gen=500, pm=0.75, pr=0.9, elite_k=1, sea_variance="paper",
                 random_state=None):
        self.n = n
        self.max_gen = max_gen
        self.pm = pm
        self.pr = pr
        self.elite_k = elite_k
        self.sea_variance = sea_variance
        self.random_state = random_state


class SOCEA(_Baseline):
    algorithm = "socea"
    _runner = staticmethod(run_socea)

    def __init__(self, n=400, max_gen=500, pm=0.75, pr=0.9, elite_k=1, socea_alpha=10.0,
                 k_max=POW_K_MAX, random_state=None):
        self.n = n
        self.max_gen = max_gen
        self.pm = pm
        self.pr = pr
        self.elite_k = elite_k
        self.socea_alpha = socea_alpha
        self.k_max = k_max
        self.random_state = random_state


class CellularEA(_Baseline):
    algorithm = "cea"
    _runner = staticmethod(run_cea)

    def __init__(self, n=400, max_gen=500, pm=0.75, pr=0.9, cea_alpha=10.0, k_max=POW_K_MAX,
                 random_state=None):
        self.n = n
        self.max_gen = max_gen
        self.pm = pm
        self.pr = pr
        self.cea_alpha = cea_alpha
        self.k_max = k_max
        self.random_state = random_state


class DiversityGuidedEA(_Baseline):
    algorithm = "dgea"

    def __init__(self, n=400, max_gen=500, pm=0.75, pr=0.9, elite_k=1, dgea_alpha=1.01,
                 k_max=POW_K_MAX, d_low=5e-6, d_high=0.25, random_state=None):
        self.n = n
        self.max_gen = max_gen
        self.pm = pm
        self.pr = pr
        self.elite_k = elite_k
        self.dgea_alpha = dgea_alpha
        self.k_max = k_max
        self.d_low = d_low
        self.d_high = d_high
        self.random_state = random_state

    def _run(self, fn, rng, seed):
        modes = []
        record = run_dgea(fn, self.baseline_params(), self.max_gen, rng, seed, mode_log=modes)
        self.modes_ = modes
        return record


ESTIMATORS = {
    "cnea": CounterNichingEA,
    "sea": StandardEA,
    "socea": SOCEA,
    "cea": CellularEA,
    "dgea": DiversityGuidedEA,
}


def make_optimizer(algorithm, **params):
    try:
        cls = ESTIMATORS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {tuple(ESTIMATORS)}")
    return cls(**params)
