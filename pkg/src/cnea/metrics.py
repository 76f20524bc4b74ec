"""Run records, population-diversity measures and run statistics."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc

from ._validation import ConfigError, check_genomes

TABLE1_RANKS = (1, 7, 15, 22, 30)
TRACE_COLUMNS = ("generation", "best_error", "mean_fitness", "diversity")


@dataclass
class RunRecord:
    """Per-generation trace of one optimisation run.

    ``trace`` is a float array with columns ``TRACE_COLUMNS``; row ``t`` holds
    generation ``t`` (row 0 is the initial population).
    """

    algorithm: str
    function: str
    dim: int
    seed: int
    trace: np.ndarray
    final_best_error: float
    final_genome: np.ndarray = field(default=None, repr=False)

    @property
    def generations(self):
        return self.trace[:, 0].astype(int)

    @property
    def best_error(self):
        return self.trace[:, 1]

    @property
    def mean_fitness(self):
        return self.trace[:, 2]

    @property
    def diversity(self):
        return self.trace[:, 3]


class TraceRecorder:
    """Accumulates trace rows and the best-so-far individual for a run."""

    def __init__(self, fn):
        self.fn = fn
        self.rows = []
        self.best_fitness = math.inf
        self.best_genome = None

    def record(self, pop):
        i = pop.best_index
        if self.best_genome is None or pop.fitness[i] < self.best_fitness:
            self.best_fitness = float(pop.fitness[i])
            self.best_genome = pop.genomes[i].copy()
        error = max(self.best_fitness - self.fn.optimum_value, 0.0)
        self.rows.append((pop.generation, error, float(np.mean(pop.fitness)),
                          diversity(pop.genomes, self.fn.space)))

    def finish(self, algorithm, seed):
        trace = np.array(self.rows, dtype=float).reshape(-1, len(TRACE_COLUMNS))
        return RunRecord(algorithm, self.fn.id, self.fn.dim, int(seed) if seed is not None else -1,
                         trace, float(trace[-1, 1]), self.best_genome)


def _genomes(pop):
    return getattr(pop, "genomes", pop)


def diversity(pop, space):
    """Mean distance to the population's average point, divided by the box diagonal."""
    X = check_genomes(_genomes(pop))
    if X.shape[0] == 0:
        raise ValueError("diversity of an empty population is undefined")
    centre = X.mean(axis=0)
    dist = np.sqrt(np.sum((X - centre) ** 2, axis=1))
    return float(np.sum(dist) / (space.diagonal * X.shape[0]))


def degree_of_diversity(pop, space, bins=16):
    """``(delta, mu)``: number of non-converged and of converged coordinates.

    Each coordinate is discretised into ``bins`` equal levels; a coordinate is
    converged when every individual sits at the same level.
    """
    from .niching import cell_keys

    if bins < 2:
        raise ConfigError("bins must be >= 2", key="bins")
    levels = cell_keys(check_genomes(_genomes(pop), space.dim), space, bins)
    delta = int(np.sum(np.any(levels != levels[0], axis=0)))
    return delta, space.dim - delta


@dataclass
class AggregateStats:
    errors: np.ndarray
    best: float
    r7: float
    median: float
    r22: float
    worst: float
    mean: float
    std: float

    STATISTICS = ("best", "r7", "median", "r22", "worst", "mean", "std")

    def as_dict(self):
        return {k: getattr(self, k) for k in self.STATISTICS}


def report_ranks(n):
    """1-based positions read from a sorted list of ``n`` runs."""
    return tuple(min(max(int(math.floor(k * n / 30 + 0.5)), 1), n) for k in TABLE1_RANKS)


def aggregate_runs(errors):
    errors = np.sort(np.asarray(errors, dtype=float))
    n = errors.size
    if n < 2:
        raise ConfigError("at least two runs are needed to aggregate", key="runs")
    picks = [float(errors[r - 1]) for r in report_ranks(n)]
    mean = math.fsum(errors) / n
    std = math.sqrt(math.fsum((errors - mean) ** 2) / (n - 1))
    return AggregateStats(errors, *picks, mean, std)


@dataclass
class TTestResult:
    t_statistic: float
    degrees_of_freedom: float
    p_two_tailed: float


def t_two_tailed_p(t, df):
    """Two-tailed p-value of Student's t via the regularised incomplete beta function."""
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return float(min(max(betainc(df / 2.0, 0.5, x), 0.0), 1.0))


def t_test_two_tailed(a, b, mode="pooled"):
    """Two-sample t-test; ``mode`` is ``pooled`` (equal variances) or ``welch``."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    na, nb = a.size, b.size
    if na < 2 or nb < 2:
        raise ConfigError("each sample needs at least two values")
    ma, mb = math.fsum(a) / na, math.fsum(b) / nb
    va = math.fsum((a - ma) ** 2) / (na - 1)
    vb = math.fsum((b - mb) ** 2) / (nb - 1)
    diff = ma - mb
    if mode == "pooled":
        df = float(na + nb - 2)
        pooled = ((na - 1) * va + (nb - 1) * vb) / df
        se2 = pooled * (1.0 / na + 1.0 / nb)
    elif mode == "welch":
        qa, qb = va / na, vb / nb
        se2 = qa + qb
        df = se2 ** 2 / (qa ** 2 / (na - 1) + qb ** 2 / (nb - 1)) if se2 > 0 else float(na + nb - 2)
    else:
        raise ConfigError(f"unknown t-test mode {mode!r}", key="t_test")
    if se2 == 0:
        if diff == 0:
            return TTestResult(0.0, df, 1.0)
        return TTestResult(math.copysign(math.inf, diff), df, 0.0)
    t = diff / math.sqrt(se2)
    return TTestResult(t, df, t_two_tailed_p(t, df))


def improvement_phase_diversity(record, window=5):
    """Average diversity over improving generations after steady improvement sets in.

    The onset is the first generation closing a run of ``window`` consecutive
    strict decreases of the mean fitness. Generations from the onset on whose
    mean fitness decreased contribute their diversity. Returns 0 without onset.
    """
    mean_fit = np.asarray(record.mean_fitness if hasattr(record, "mean_fitness") else record[:, 2])
    div = np.asarray(record.diversity if hasattr(record, "diversity") else record[:, 3])
    if mean_fit.size == 0:
        raise ValueError("empty trace")
    improved = np.zeros(mean_fit.size, dtype=bool)
    improved[1:] = mean_fit[1:] < mean_fit[:-1]
    streak = 0
    onset = None
    for g, up in enumerate(improved):
        streak = streak + 1 if up else 0
        if streak >= window:
            onset = g
            break
    if onset is None:
        return 0.0
    picked = div[onset:][improved[onset:]]
    return math.fsum(picked) / picked.size
