"""Comparison algorithms: standard EA, self-organised-criticality EA,
cellular EA on a 20x20 torus and diversity-guided EA.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import ConfigError, check_param, check_probability
from .benchmarks import evaluate_batch
from .metrics import TraceRecorder, diversity
from .operators import (POW_K_MAX, Population, breed, crossover_genomes, elitist_replacement,
                        init_population, mutate_genomes, pow_sample, tournament_indices)

CEA_SHAPE = (20, 20)


@dataclass
class BaselineParams:
    n: int = 400
    pm: float = 0.75
    pr: float = 0.9
    elite_k: int = 1
    sea_variance: str = "paper"
    socea_alpha: float = 10.0
    cea_alpha: float = 10.0
    dgea_alpha: float = 1.01
    k_max: int = POW_K_MAX
    d_low: float = 5e-6
    d_high: float = 0.25

    def __post_init__(self):
        check_param(self.n, "n", int, min_val=4)
        check_probability(self.pm, "pm")
        check_probability(self.pr, "pr")
        check_param(self.elite_k, "elite_k", int, min_val=0)
        if self.elite_k >= self.n:
            raise ConfigError("elite_k must be smaller than n", key="elite_k")
        if self.sea_variance not in ("paper", "reciprocal"):
            raise ConfigError("must be 'paper' or 'reciprocal'", key="sea_variance")
        for name in ("socea_alpha", "cea_alpha", "dgea_alpha"):
            if not getattr(self, name) > 1:
                raise ConfigError("power-law exponent must exceed 1", key=name)
        check_param(self.k_max, "k_max", int, min_val=1)
        if not 0 < self.d_low < self.d_high:
            raise ConfigError("need 0 < d_low < d_high", key="d_low")


def sea_variance(t, schedule="paper"):
    """Mutation variance of the standard EA in generation ``t``."""
    v = 1.0 + math.sqrt(t + 1)
    return v if schedule == "paper" else 1.0 / v


def _generational(fn, params, max_gen, rng, seed, algorithm, variance_of):
    check_param(max_gen, "max_gen", int, min_val=0)
    pop = init_population(fn, params.n, rng)
    rec = TraceRecorder(fn)
    rec.record(pop)
    for t in range(max_gen):
        offspring = breed(pop, fn, params.pr, params.pm, variance_of(t), "whole_genome", rng)
        pop = elitist_replacement(pop, offspring, params.elite_k)
        pop.generation = t + 1
        rec.record(pop)
    return rec.finish(algorithm, seed)


def run_sea(fn, params, max_gen, rng, seed=None):
    return _generational(fn, params, max_gen, rng, seed, "sea",
                         lambda t: sea_variance(t, params.sea_variance))


def run_socea(fn, params, max_gen, rng, seed=None):
    """Standard EA whose per-individual mutation variance is drawn from POW(alpha)."""
    return _generational(fn, params, max_gen, rng, seed, "socea",
                         lambda t: pow_sample(params.socea_alpha, rng, params.n, params.k_max))


def torus_neighbors(shape=CEA_SHAPE):
    """Von Neumann neighbours (N, S, W, E) of every cell, as flat indices.

    Cell ``(r, c)`` has flat index ``r * width + c``.
    """
    h, w = shape
    r, c = np.divmod(np.arange(h * w), w)
    return np.stack([((r - 1) % h) * w + c, ((r + 1) % h) * w + c,
                     r * w + (c - 1) % w, r * w + (c + 1) % w], axis=1)


def cea_step(pop, fn, params, rng, neighbors):
    """One synchronous update of the cellular EA; returns the new grid."""
    nb_fit = pop.fitness[neighbors]
    mate = neighbors[np.arange(len(pop)), np.argmin(nb_fit, axis=1)]
    child, _ = crossover_genomes(pop.genomes, pop.genomes[mate], params.pr, rng, fn.space)
    variance = pow_sample(params.cea_alpha, rng, len(pop), params.k_max)
    child = mutate_genomes(child, variance, params.pm, "whole_genome", rng, fn.space)
    child_fit = evaluate_batch(fn, child)
    better = child_fit < pop.fitness
    genomes = np.where(better[:, None], child, pop.genomes)
    return Population(genomes, np.where(better, child_fit, pop.fitness), pop.generation + 1)


def run_cea(fn, params, max_gen, rng, seed=None):
    check_param(max_gen, "max_gen", int, min_val=0)
    if params.n != CEA_SHAPE[0] * CEA_SHAPE[1]:
        raise ConfigError(f"the cellular EA needs n = {CEA_SHAPE[0] * CEA_SHAPE[1]}", key="n")
    neighbors = torus_neighbors()
    pop = init_population(fn, params.n, rng)
    rec = TraceRecorder(fn)
    rec.record(pop)
    for _ in range(max_gen):
        pop = cea_step(pop, fn, params, rng, neighbors)
        rec.record(pop)
    return rec.finish("cea", seed)


def next_mode(mode, div, d_low, d_high):
    if div < d_low:
        return "explore"
    if div > d_high:
        return "exploit"
    return mode


def run_dgea(fn, params, max_gen, rng, seed=None, mode_log=None):
    """Diversity-guided EA.

    Alternates between recombination-only exploitation and mutation-only
    exploration; the switch is driven by the population diversity with a
    hysteresis band ``[d_low, d_high]``. The mode chosen before each
    generation is appended to ``mode_log`` if one is given.
    """
    check_param(max_gen, "max_gen", int, min_val=0)
    pop = init_population(fn, params.n, rng)
    rec = TraceRecorder(fn)
    rec.record(pop)
    mode = "exploit"
    for t in range(max_gen):
        mode = next_mode(mode, rec.rows[-1][3], params.d_low, params.d_high)
        if mode_log is not None:
            mode_log.append(mode)
        if mode == "exploit":
            offspring = breed(pop, fn, params.pr, 0.0, 1.0, "whole_genome", rng)
        else:
            variance = pow_sample(params.dgea_alpha, rng, params.n, params.k_max)
            X = mutate_genomes(pop.genomes, variance, params.pm, "whole_genome", rng, fn.space)
            offspring = Population(X, evaluate_batch(fn, X), t + 1)
        pop = elitist_replacement(pop, offspring, params.elite_k)
        pop.generation = t + 1
        rec.record(pop)
    return rec.finish("dgea", seed)


RUNNERS = {"sea": run_sea, "socea": run_socea, "cea": run_cea, "dgea": run_dgea}
