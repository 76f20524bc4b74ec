"""Counter-niching EA: grid pseudo-niching, informed mutation and the main loop.

Each generation the population is binned on a sparse grid of ``g`` equal
bins per dimension. Cells holding at least ``max(2, ceil(rho * N))`` members
are *donor communities*. For every community, in order, the best member is
kept as a representative and its worst members are overwritten by samples
drawn from unoccupied cells, chosen to be both fit and far from the
representatives collected so far in the generation. Ordinary tournament
selection, crossover and mutation then act on the whole population, and an
elitist merge forms the next generation.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import ConfigError, check_param, check_probability
from .benchmarks import evaluate_batch
from .metrics import TraceRecorder
from .operators import Population, breed, elitist_replacement, init_population


def cell_keys(X, space, g):
    """Integer bin indices of every row of ``X`` (shape ``(n, dim)``)."""
    X = np.atleast_2d(X)
    if np.any(X < space.lo) or np.any(X > space.hi):
        raise ValueError("cannot key a point outside the search space")
    bins = np.floor((X - space.lo) / space.width * g).astype(np.int64)
    return np.clip(bins, 0, g - 1)


def cell_key(x, space, g):
    """Grid cell of a single point, as a tuple of bin indices."""
    return tuple(int(b) for b in cell_keys(np.asarray(x, float)[None, :], space, g)[0])


@dataclass
class Community:
    key: tuple
    member_indices: list
    best_index: int

    @property
    def occupancy(self):
        return len(self.member_indices)


@dataclass
class RepresentativeMemory:
    points: list = field(default_factory=list)

    def clear(self):
        self.points.clear()

    def append(self, x):
        self.points.append(np.asarray(x, dtype=float).copy())

    def __len__(self):
        return len(self.points)

    def as_array(self, dim):
        if not self.points:
            return np.empty((0, dim))
        return np.vstack(self.points)


@dataclass
class CnParams:
    g: int = 4
    rho: float = 0.05
    s: int = 20
    replace_frac: float = 0.5
    pm: float = 0.01
    pr: float = 0.9
    elite_k: int = None
    mutation_variance: float = 1.0
    final_variance: float = 1e-8
    cooling_start: float = 0.5
    mutation_mode: str = "per_gene"
    crossover: str = "blend"

    def __post_init__(self):
        check_param(self.g, "grid_bins", int, min_val=1)
        check_param(self.rho, "community_frac", min_val=0.0, max_val=1.0,
                    include_boundaries="right")
        check_param(self.s, "samples_per_community", int, min_val=1)
        check_probability(self.replace_frac, "replace_frac")
        check_probability(self.pm, "pm")
        check_probability(self.pr, "pr")
        if self.elite_k is not None:
            check_param(self.elite_k, "elite_k", int, min_val=0)
        check_param(self.mutation_variance, "mutation_variance", min_val=0.0,
                    include_boundaries="neither")
        if self.final_variance is not None:
            check_param(self.final_variance, "final_variance", min_val=0.0,
                        include_boundaries="neither")
        check_probability(self.cooling_start, "cooling_start")
        if self.crossover not in ("whole", "blend"):
            raise ConfigError("must be 'whole' or 'blend'", key="crossover")
        if self.mutation_mode not in ("per_gene", "whole_genome"):
            raise ConfigError("must be 'per_gene' or 'whole_genome'", key="mutation_mode")

    def variance_at(self, t, max_gen):
        """Mutation variance used to breed generation ``t`` (1-based).

        Constant for the first ``cooling_start`` share of the budget, then
        geometric decay reaching ``final_variance`` at the last generation.
        ``final_variance=None`` keeps the variance constant.
        """
        if self.final_variance is None or max_gen <= 1:
            return self.mutation_variance
        start = self.cooling_start * (max_gen - 1)
        frac = max(t - 1 - start, 0.0) / max(max_gen - 1 - start, 1e-12)
        return self.mutation_variance * (self.final_variance / self.mutation_variance) ** frac

    def elite_for(self, n):
        """Elite count for population size ``n``; 10% of ``n`` unless set."""
        return max(1, n // 10) if self.elite_k is None else self.elite_k

    def threshold(self, n):
        """Minimum occupancy for a cell to count as a community."""
        return max(2, math.ceil(self.rho * n))


def _group_by_cell(keys):
    groups = {}
    for i, row in enumerate(map(tuple, keys.tolist())):
        groups.setdefault(row, []).append(i)
    return groups


def grid_niching(pop, space, params):
    """Donor communities of ``pop``, most crowded first.

    Ties in occupancy are broken by the better best-member fitness, then by
    the lexicographic cell key.
    """
    keys = cell_keys(pop.genomes, space, params.g)
    theta = params.threshold(len(pop))
    out = []
    for key, members in _group_by_cell(keys).items():
        if len(members) >= theta:
            best = min(members, key=lambda i: (pop.fitness[i], i))
            out.append(Community(key, members, best))
    out.sort(key=lambda c: (-c.occupancy, pop.fitness[c.best_index], c.key))
    return out


def sample_unexplored(space, occupied, s, g, rng):
    """Up to ``s`` uniform points from cells not in ``occupied``.

    Rejection sampling with at most ``50 * s`` attempts; any shortfall is
    filled with unconstrained uniform points. Returns ``(points, constrained)``
    where ``constrained[i]`` is False for the fallback points.
    """
    if s < 1:
        raise ConfigError("samples per community must be >= 1", key="samples_per_community")
    cap = 50 * s
    accepted = []
    attempts = 0
    while len(accepted) < s and attempts < cap:
        batch = space.clip(space.lo + rng.random((s, space.dim)) * space.width)
        keys = cell_keys(batch, space, g)
        for x, key in zip(batch, map(tuple, keys.tolist())):
            if attempts >= cap or len(accepted) >= s:
                break
            attempts += 1
            if key not in occupied:
                accepted.append(x)
    n_free = s - len(accepted)
    pts = np.array(accepted).reshape(-1, space.dim)
    if n_free:
        extra = space.clip(space.lo + rng.random((n_free, space.dim)) * space.width)
        pts = np.vstack([pts, extra])
    constrained = np.arange(s) < s - n_free
    return pts, constrained


def _ordinal_ranks(values):
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.int64)
    ranks[order] = np.arange(len(values))
    return ranks


def select_representative(genomes, fitness, memory):
    """Index of the candidate with the smallest fitness rank + distance rank.

    Distance is the mean Euclidean distance to the memory points, larger is
    better. Ties prefer the better fitness rank, then the lower index.
    """
    genomes = np.atleast_2d(np.asarray(genomes, float))
    fitness = np.asarray(fitness, float)
    if fitness.size == 0:
        raise ValueError("no candidates to choose from")
    rank_f = _ordinal_ranks(fitness)
    if len(memory) == 0:
        rank_d = np.zeros_like(rank_f)
    else:
        M = memory.as_array(genomes.shape[1])
        d = np.sqrt(((genomes[:, None, :] - M[None, :, :]) ** 2).sum(axis=2)).mean(axis=1)
        rank_d = _ordinal_ranks(-d)
    total = rank_f + rank_d
    # lexsort: last key is primary
    return int(np.lexsort((np.arange(fitness.size), rank_f, total))[0])


@dataclass
class InjectionReport:
    """What one informed-mutation pass did, for diagnostics and tests."""

    replaced: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    constrained: list = field(default_factory=list)
    memory_sizes: list = field(default_factory=list)


def inject_unexplored(pop, communities, params, fn, rng, memory=None):
    """Overwrite the worst members of each community with informed samples.

    Returns ``(population, memory, report)``; the input population is not
    modified.
    """
    space = fn.space
    pop = pop.copy()
    memory = RepresentativeMemory() if memory is None else memory
    memory.clear()
    report = InjectionReport()
    if not communities:
        return pop, memory, report
    occupied = set(map(tuple, cell_keys(pop.genomes, space, params.g).tolist()))
    for com in communities:
        memory.append(pop.genomes[com.best_index])
        pts, constrained = sample_unexplored(space, occupied, params.s, params.g, rng)
        fit = evaluate_batch(fn, pts)
        r = max(1, math.floor(params.replace_frac * com.occupancy))
        r = min(r, com.occupancy - 1, params.s)
        chosen = []
        remaining = list(range(len(pts)))
        for _ in range(r):
            j = select_representative(pts[remaining], fit[remaining], memory)
            pick = remaining.pop(j)
            chosen.append(pick)
            memory.append(pts[pick])
        members = sorted(com.member_indices, key=lambda i: (-pop.fitness[i], -i))
        worst = [i for i in members if i != com.best_index][:r]
        for i, pick in zip(worst, chosen):
            pop.genomes[i] = pts[pick]
            pop.fitness[i] = fit[pick]
            occupied.add(cell_key(pts[pick], space, params.g))
        report.replaced.append(worst)
        report.samples.append(pts[chosen])
        report.constrained.append(constrained[chosen])
        report.memory_sizes.append(len(memory))
    return pop, memory, report


def informed_op(pop, communities, params, fn, rng):
    """Informed mutation on the communities, then regular genetic operators.

    Returns the offspring population; the elitist merge is left to the caller.
    """
    injected, _, _ = inject_unexplored(pop, communities, params, fn, rng)
    return breed(injected, fn, params.pr, params.pm, params.mutation_variance,
                 params.mutation_mode, rng, params.crossover)


def counter_niching_ea(fn, params, n, max_gen, rng, seed=None):
    """Run the counter-niching EA for ``max_gen`` generations.

    Returns a :class:`RunRecord` with ``max_gen + 1`` trace rows.
    """
    check_param(n, "n", int, min_val=2)
    check_param(max_gen, "max_gen", int, min_val=0)
    elite_k = params.elite_for(n)
    if elite_k >= n:
        raise ConfigError("elite_k must be smaller than the population size", key="elite_k")
    pop = init_population(fn, n, rng)
    rec = TraceRecorder(fn)
    rec.record(pop)
    for t in range(1, max_gen + 1):
        communities = grid_niching(pop, fn.space, params)
        injected, _, _ = inject_unexplored(pop, communities, params, fn, rng)
        offspring = breed(injected, fn, params.pr, params.pm, params.variance_at(t, max_gen),
                          params.mutation_mode, rng, params.crossover)
        pop = elitist_replacement(injected, offspring, elite_k)
        pop.generation = t
        rec.record(pop)
    return rec.finish("cnea", seed)
