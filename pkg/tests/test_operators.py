import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from cnea import ConfigError, make_function
from cnea.benchmarks import SearchSpace
from cnea.operators import (
    Individual,
    Population,
    arithmetic_crossover,
    binary_tournament,
    breed,
    crossover_genomes,
    elitist_replacement,
    gaussian_mutate,
    init_population,
    mutate_genomes,
    pow_pmf,
    pow_sample,
)
from cnea.rng import derive_seed


class FixedDraws:
    """Generator stand-in that replays the given integer pairs."""

    def __init__(self, pairs):
        self.pairs = np.asarray(pairs)

    def integers(self, lo, hi, size):
        return self.pairs.reshape(size)


def pop_of(fitness, dim=1):
    f = np.asarray(fitness, float)
    return Population(np.tile(f[:, None], (1, dim)), f)


# initialisation

def test_init_bounds_and_evaluated():
    fn = make_function("elp", 1, space=SearchSpace.box(0, 1, 1))
    pop = init_population(fn, 300, np.random.default_rng(0))
    assert len(pop) == 300
    assert pop.genomes.min() >= 0 and pop.genomes.max() <= 1
    np.testing.assert_array_equal(pop.fitness, pop.genomes[:, 0] ** 2)


def test_init_deterministic():
    fn = make_function("rtg", 5)
    a = init_population(fn, 50, np.random.default_rng(3))
    b = init_population(fn, 50, np.random.default_rng(3))
    np.testing.assert_array_equal(a.genomes, b.genomes)


def test_init_uniform_mean():
    fn = make_function("ack", 20)
    pop = init_population(fn, 400, np.random.default_rng(1))
    # U(-30, 30): sd = 60/sqrt(12)
    se = 60 / np.sqrt(12) / np.sqrt(400)
    assert np.all(np.abs(pop.genomes.mean(axis=0)) < 5 * se)


def test_init_too_small():
    with pytest.raises(ConfigError):
        init_population(make_function("rtg", 2), 1, np.random.default_rng(0))


# selection

def test_tournament_single_member():
    assert binary_tournament(pop_of([5.0]), np.random.default_rng(0)).fitness == 5.0


def test_tournament_fixed_draws():
    pop = pop_of([1.0, 2.0])
    assert binary_tournament(pop, FixedDraws([[0, 1]])).fitness == 1.0
    assert binary_tournament(pop, FixedDraws([[1, 0]])).fitness == 1.0


def test_tournament_tie_goes_to_first():
    pop = Population(np.array([[0.0], [1.0]]), np.array([3.0, 3.0]))
    assert binary_tournament(pop, FixedDraws([[1, 0]])).genome[0] == 1.0


def test_tournament_best_frequency():
    from cnea.operators import tournament_indices
    idx = tournament_indices(np.array([1.0, 2.0, 3.0, 4.0]), 100_000, np.random.default_rng(7))
    assert abs(np.mean(idx == 0) - 7 / 16) < 0.01


# crossover

def test_crossover_hand_values():
    a, b = Individual(np.array([0.0, 0.0])), Individual(np.array([2.0, 4.0]))
    c1, c2 = arithmetic_crossover(a, b, 1.0, None, u=0.25)
    np.testing.assert_allclose(c1.genome, [1.5, 3.0])
    np.testing.assert_allclose(c2.genome, [0.5, 1.0])


def test_crossover_extremes():
    a, b = Individual(np.array([1.0, -2.0])), Individual(np.array([3.0, 5.0]))
    c1, c2 = arithmetic_crossover(a, b, 1.0, None, u=0.0)
    np.testing.assert_array_equal(c1.genome, b.genome)
    np.testing.assert_array_equal(c2.genome, a.genome)
    c1, c2 = arithmetic_crossover(a, b, 1.0, None, u=0.5)
    np.testing.assert_array_equal(c1.genome, [2.0, 1.5])
    np.testing.assert_array_equal(c1.genome, c2.genome)


def test_crossover_pr_zero_copies():
    a, b = Individual(np.array([1.0])), Individual(np.array([2.0]))
    c1, c2 = arithmetic_crossover(a, b, 0.0, np.random.default_rng(0))
    assert c1.genome[0] == 1.0 and c2.genome[0] == 2.0


def test_crossover_length_mismatch():
    with pytest.raises(ValueError):
        arithmetic_crossover(Individual(np.zeros(2)), Individual(np.zeros(3)), 1.0, None, u=0.5)


@pytest.mark.parametrize("kind", ["whole", "blend"])
def test_crossover_preserves_pair_sum(kind):
    rng = np.random.default_rng(4)
    sp = SearchSpace.box(-10, 10, 3)
    A, B = rng.uniform(-1, 1, (20, 3)), rng.uniform(-1, 1, (20, 3))
    C1, C2 = crossover_genomes(A, B, 1.0, rng, sp, kind)
    np.testing.assert_allclose(C1 + C2, A + B, atol=1e-12)


# mutation

def test_mutation_p_zero_is_identity():
    sp = SearchSpace.box(-5, 5, 4)
    x = np.array([0.1, -4.9, 3.3, 5.0])
    for mode in ("per_gene", "whole_genome"):
        out = gaussian_mutate(Individual(x), 2.0, 0.0, mode, np.random.default_rng(0), sp)
        np.testing.assert_array_equal(out.genome, x)


def test_mutation_variance_matches():
    sp = SearchSpace.box(-1e6, 1e6, 2)
    X = np.zeros((50_000, 2))
    out = mutate_genomes(X, 2.5, 1.0, "whole_genome", np.random.default_rng(2), sp)
    var = (out - X).var(axis=0)
    assert np.all(np.abs(var / 2.5 - 1) < 0.05)


def test_mutation_per_row_variance():
    sp = SearchSpace.box(-1e6, 1e6, 1)
    X = np.zeros((40_000, 1))
    v = np.repeat([1.0, 100.0], 20_000)
    out = mutate_genomes(X, v, 1.0, "whole_genome", np.random.default_rng(3), sp)
    assert out[:20_000].var() == pytest.approx(1.0, rel=0.05)
    assert out[20_000:].var() == pytest.approx(100.0, rel=0.05)


def test_mutation_per_gene_rate():
    sp = SearchSpace.box(-1e6, 1e6, 10)
    X = np.zeros((10_000, 10))
    out = mutate_genomes(X, 1.0, 0.01, "per_gene", np.random.default_rng(5), sp)
    assert np.mean(out != 0) == pytest.approx(0.01, abs=0.002)


def test_mutation_clamps_at_bound():
    sp = SearchSpace.box(0, 1, 1)
    hi = Individual(np.array([1.0]))
    for seed in range(20):
        out = gaussian_mutate(hi, 4.0, 1.0, "whole_genome", np.random.default_rng(seed), sp)
        assert 0.0 <= out.genome[0] <= 1.0


def test_mutation_rejects_bad_variance():
    sp = SearchSpace.box(0, 1, 1)
    with pytest.raises(ValueError):
        gaussian_mutate(Individual(np.array([0.5])), 0.0, 1.0, "per_gene", np.random.default_rng(0), sp)


# power law

def test_pow_alpha10_mass_at_one():
    H = sum(k ** -10.0 for k in range(1, 101))
    assert pow_pmf(10.0)[0] == pytest.approx(1 / H, rel=1e-12)
    assert 1 / H == pytest.approx(0.99901, abs=5e-6)


def test_pow_support():
    draws = pow_sample(1.01, np.random.default_rng(0), size=10_000)
    assert draws.min() >= 1 and draws.max() <= 100
    assert np.all(draws == np.round(draws))
    assert isinstance(pow_sample(2.0, np.random.default_rng(0)), float)


def test_pow_alpha_validation():
    for alpha in (1.0, 0.5):
        with pytest.raises(ConfigError):
            pow_sample(alpha, np.random.default_rng(0))


def test_pow_empirical_mass_and_ks():
    draws = pow_sample(1.5, np.random.default_rng(1), size=1_000_000)
    pmf = pow_pmf(1.5)
    counts = np.bincount(draws.astype(int), minlength=101)[1:]
    emp = counts / draws.size
    se = np.sqrt(pmf * (1 - pmf) / draws.size)
    assert np.all(np.abs(emp[:10] - pmf[:10]) < 3 * se[:10])
    ks = np.max(np.abs(np.cumsum(emp) - np.cumsum(pmf)))
    assert ks < 0.01


def test_pow_matches_scipy_zipfian():
    k = np.arange(1, 101)
    np.testing.assert_allclose(pow_pmf(2.3), stats.zipfian.pmf(k, 2.3, 100), rtol=1e-10)


# elitism

def test_elitist_zero_returns_offspring():
    parents, offspring = pop_of([1.0, 3.0]), pop_of([2.0, 4.0])
    out = elitist_replacement(parents, offspring, 0)
    np.testing.assert_array_equal(out.fitness, offspring.fitness)


def test_elitist_keeps_parent_best():
    out = elitist_replacement(pop_of([1.0, 5.0, 6.0]), pop_of([2.0, 3.0, 4.0]), 1)
    assert out.fitness.min() == 1.0
    assert len(out) == 3


def test_elitist_enumerated_merge():
    out = elitist_replacement(pop_of([1.0, 3.0]), pop_of([2.0, 4.0]), 1)
    assert sorted(out.fitness) == [1.0, 2.0]


def test_elitist_errors():
    with pytest.raises(ValueError):
        elitist_replacement(pop_of([1.0, 2.0]), pop_of([1.0]), 0)
    with pytest.raises(ValueError):
        elitist_replacement(pop_of([1.0, 2.0]), pop_of([1.0, 2.0]), 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 100), min_size=3, max_size=12), st.integers(0, 2**32 - 1),
       st.integers(0, 2))
def test_elitist_never_worsens(fit, seed, k):
    rng = np.random.default_rng(seed)
    n = len(fit)
    parents = pop_of(fit)
    offspring = pop_of(rng.uniform(0, 100, n))
    out = elitist_replacement(parents, offspring, min(k + 1, n - 1))
    assert len(out) == n
    assert out.fitness.min() <= parents.fitness.min()


# properties over all operators

@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1), st.sampled_from(["whole", "blend"]),
       st.sampled_from(["per_gene", "whole_genome"]))
def test_breed_stays_in_bounds(dim, seed, kind, mode):
    fn = make_function("rtg", dim)
    rng = np.random.default_rng(seed)
    # start on the box corners to stress clamping
    corners = rng.choice([-5.12, 5.12], size=(10, dim))
    pop = Population(corners, np.zeros(10))
    child = breed(pop, fn, 1.0, 1.0, 50.0, mode, rng, kind)
    assert np.all(child.genomes >= -5.12) and np.all(child.genomes <= 5.12)
    assert child.generation == 1


def test_breed_deterministic():
    fn = make_function("ack", 4)
    pop = init_population(fn, 20, np.random.default_rng(0))
    a = breed(pop, fn, 0.9, 0.5, 1.0, "per_gene", np.random.default_rng(1))
    b = breed(pop, fn, 0.9, 0.5, 1.0, "per_gene", np.random.default_rng(1))
    np.testing.assert_array_equal(a.genomes, b.genomes)


def test_derive_seed_distinct_and_stable():
    seeds = {derive_seed(0, a, "rtg", 20, r) for a in ("cnea", "sea") for r in range(30)}
    assert len(seeds) == 60
    assert derive_seed(5, "cnea", "ack", 20, 3) == derive_seed(5, "cnea", "ack", 20, 3)
    assert all(0 <= s < 2**64 for s in seeds)
