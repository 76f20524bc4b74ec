"""Counter-niching evolutionary algorithm with baseline EAs and a benchmark harness."""

from ._validation import ConfigError
from .baselines import BaselineParams, run_cea, run_dgea, run_sea, run_socea
from .benchmarks import ObjectiveFunction, SearchSpace, default_space, evaluate, make_function
from .estimators import (CellularEA, CounterNichingEA, DiversityGuidedEA, SOCEA, StandardEA,
                         make_optimizer)
from .metrics import (RunRecord, aggregate_runs, degree_of_diversity, diversity,
                      improvement_phase_diversity, t_test_two_tailed)
from .niching import CnParams, counter_niching_ea, grid_niching, informed_op

__version__ = "0.1.0"

__all__ = [
    "BaselineParams",
    "CellularEA",
    "CnParams",
    "ConfigError",
    "CounterNichingEA",
    "DiversityGuidedEA",
    "ObjectiveFunction",
    "RunRecord",
    "SOCEA",
    "SearchSpace",
    "StandardEA",
    "aggregate_runs",
    "counter_niching_ea",
    "default_space",
    "degree_of_diversity",
    "diversity",
    "evaluate",
    "grid_niching",
    "improvement_phase_diversity",
    "informed_op",
    "make_function",
    "make_optimizer",
    "run_cea",
    "run_dgea",
    "run_sea",
    "run_socea",
    "t_test_two_tailed",
]
