"""Population containers and the genetic operators shared by every algorithm.

Scalar operators (:func:`binary_tournament`, :func:`arithmetic_crossover`,
:func:`gaussian_mutate`) act on single individuals; the ``*_indices`` /
``*_genomes`` variants do the same work on whole arrays and are what the
main loops use.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import ConfigError
from .benchmarks import evaluate_batch

POW_K_MAX = 100


@dataclass
class Individual:
    genome: np.ndarray
    fitness: float = float("nan")


@dataclass
class Population:
    """Genomes stored row-wise with their cached objective values."""

    genomes: np.ndarray
    fitness: np.ndarray
    generation: int = 0

    def __len__(self):
        return self.genomes.shape[0]

    def __getitem__(self, i):
        return Individual(self.genomes[i].copy(), float(self.fitness[i]))

    @property
    def best_index(self):
        return int(np.argmin(self.fitness))

    def copy(self):
        return Population(self.genomes.copy(), self.fitness.copy(), self.generation)


def init_population(fn, n, rng):
    """``n`` individuals drawn uniformly in ``fn.space`` and evaluated."""
    if n < 2:
        raise ConfigError("population size must be >= 2", key="n")
    space = fn.space
    X = space.lo + rng.random((n, space.dim)) * space.width
    # lo + u*(hi - lo) can round one ulp past hi
    X = space.clip(X)
    return Population(X, evaluate_batch(fn, X), 0)


def tournament_indices(fitness, k, rng):
    """Winners of ``k`` independent binary tournaments (with replacement)."""
    n = len(fitness)
    if n == 0:
        raise ValueError("cannot select from an empty population")
    draws = rng.integers(0, n, size=(k, 2))
    first, second = draws[:, 0], draws[:, 1]
    return np.where(fitness[second] < fitness[first], second, first)


def binary_tournament(pop, rng):
    """Return the fitter of two uniformly drawn members; ties go to the first."""
    return pop[int(tournament_indices(pop.fitness, 1, rng)[0])]


def crossover_genomes(A, B, pr, rng, space, kind="whole"):
    """Arithmetic crossover of paired rows.

    ``kind="whole"`` draws one blend weight ``u ~ U(0,1)`` per pair;
    ``kind="blend"`` draws an independent weight for every gene.
    """
    m = A.shape[0]
    if kind == "whole":
        u = rng.random(m)[:, None]
    elif kind == "blend":
        u = rng.random(A.shape)
    else:
        raise ValueError(f"unknown crossover kind {kind!r}")
    mate = (rng.random(m) < pr)[:, None]
    C1 = np.where(mate, u * A + (1.0 - u) * B, A)
    C2 = np.where(mate, (1.0 - u) * A + u * B, B)
    return space.clip(C1), space.clip(C2)


def arithmetic_crossover(a, b, pr, rng, space=None, u=None):
    """Two children ``u*a + (1-u)*b`` and ``(1-u)*a + u*b`` with probability ``pr``.

    Passing ``u`` fixes the blend weight and forces the crossover to happen.
    """
    ga, gb = np.asarray(a.genome, float), np.asarray(b.genome, float)
    if ga.shape != gb.shape:
        raise ValueError("parents must have equal genome lengths")
    if u is None:
        if rng.random() >= pr:
            return Individual(ga.copy()), Individual(gb.copy())
        u = rng.random()
    c1, c2 = u * ga + (1.0 - u) * gb, (1.0 - u) * ga + u * gb
    if space is not None:
        c1, c2 = space.clip(c1), space.clip(c2)
    return Individual(c1), Individual(c2)


def mutate_genomes(X, variance, p, mode, rng, space):
    """Gaussian perturbation of the rows of ``X``.

    ``variance`` is a scalar or one value per row. In ``per_gene`` mode each
    gene mutates independently with probability ``p``; in ``whole_genome``
    mode each row mutates entirely with probability ``p``.
    """
    n, d = X.shape
    sigma = np.sqrt(np.broadcast_to(np.asarray(variance, dtype=float), (n,)))[:, None]
    if np.any(sigma <= 0):
        raise ValueError("mutation variance must be positive")
    if mode == "per_gene":
        mask = rng.random((n, d)) < p
    elif mode == "whole_genome":
        mask = np.broadcast_to((rng.random(n) < p)[:, None], (n, d))
    else:
        raise ValueError(f"unknown mutation mode {mode!r}")
    noise = rng.standard_normal((n, d)) * sigma
    return space.clip(np.where(mask, X + noise, X))


def gaussian_mutate(ind, variance, p, mode, rng, space):
    if variance <= 0:
        raise ValueError("mutation variance must be positive")
    child = mutate_genomes(np.asarray(ind.genome, float)[None, :], variance, p, mode, rng, space)
    return Individual(child[0])


@lru_cache(maxsize=None)
def _pow_cdf(alpha, k_max):
    k = np.arange(1, k_max + 1, dtype=float)
    w = k ** -alpha
    cdf = np.cumsum(w) / np.sum(w)
    cdf[-1] = 1.0
    cdf.setflags(write=False)
    return cdf


def pow_pmf(alpha, k_max=POW_K_MAX):
    """Probability mass of ``1..k_max`` under the truncated power law."""
    k = np.arange(1, k_max + 1, dtype=float)
    w = k ** -alpha
    return w / np.sum(w)


def pow_sample(alpha, rng, size=None, k_max=POW_K_MAX):
    """Draw from ``P(X = k) ~ k**-alpha`` on ``{1, ..., k_max}`` by inverse transform."""
    if not alpha > 1:
        raise ConfigError(f"power-law exponent must exceed 1, got {alpha}", key="alpha")
    if k_max < 1:
        raise ConfigError("k_max must be >= 1", key="k_max")
    cdf = _pow_cdf(float(alpha), int(k_max))
    u = rng.random(size)
    k = np.searchsorted(cdf, u, side="right") + 1
    if size is None:
        return float(k)
    return k.astype(float)


def elitist_replacement(parents, offspring, elite_k):
    """Keep the ``elite_k`` best of both populations, fill up with the best offspring.

    Elites come first; the surviving offspring keep their original order.
    """
    n = len(parents)
    if len(offspring) != n:
        raise ValueError("parents and offspring must have equal size")
    if not 0 <= elite_k < n:
        raise ValueError("elite_k must satisfy 0 <= elite_k < n")
    if elite_k == 0:
        return offspring.copy()
    fit = np.concatenate([parents.fitness, offspring.fitness])
    pool = np.concatenate([parents.genomes, offspring.genomes])
    elite = np.argsort(fit, kind="stable")[:elite_k]
    taken = set(int(i) - n for i in elite if i >= n)
    rest = np.array([j for j in range(n) if j not in taken], dtype=int)
    keep = rest[np.argsort(offspring.fitness[rest], kind="stable")[: n - elite_k]]
    keep = np.sort(keep) + n
    idx = np.concatenate([elite, keep])
    return Population(pool[idx], fit[idx], offspring.generation)


def breed(pop, fn, pr, pm, variance, mode, rng, crossover="whole"):
    """Offspring by binary tournament, arithmetic crossover and Gaussian mutation."""
    n = len(pop)
    half = (n + 1) // 2
    idx = tournament_indices(pop.fitness, 2 * half, rng)
    A, B = pop.genomes[idx[:half]], pop.genomes[idx[half:]]
    C1, C2 = crossover_genomes(A, B, pr, rng, fn.space, crossover)
    children = np.concatenate([C1, C2])[:n]
    if np.ndim(variance) > 0:
        variance = np.asarray(variance)[:n]
    children = mutate_genomes(children, variance, pm, mode, rng, fn.space)
    return Population(children, evaluate_batch(fn, children), pop.generation + 1)
