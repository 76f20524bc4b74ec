import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnea import ConfigError, aggregate_runs, degree_of_diversity, diversity, t_test_two_tailed
from cnea.benchmarks import SearchSpace
from cnea.metrics import improvement_phase_diversity, report_ranks, t_two_tailed_p
from cnea.operators import Population


def t_pvalue_oracle(t, df):
    """Two-tailed p by integrating the Student t density with mpmath."""
    mpmath.mp.dps = 30
    df = mpmath.mpf(df)
    c = mpmath.gamma((df + 1) / 2) / (mpmath.sqrt(df * mpmath.pi) * mpmath.gamma(df / 2))
    tail = mpmath.quad(lambda x: c * (1 + x * x / df) ** (-(df + 1) / 2), [abs(t), mpmath.inf])
    return float(2 * tail)


# diversity

def test_diversity_identical():
    X = np.tile([0.3, -1.0, 2.0], (7, 1))
    assert diversity(X, SearchSpace.box(-5, 5, 3)) == 0.0


def test_diversity_two_points():
    assert diversity(np.array([[0.0], [1.0]]), SearchSpace.box(0, 1, 1)) == pytest.approx(0.5, abs=1e-12)


def test_diversity_accepts_population():
    pop = Population(np.array([[0.0], [1.0]]), np.zeros(2))
    assert diversity(pop, SearchSpace.box(0, 1, 1)) == 0.5


def test_diversity_empty():
    with pytest.raises(ValueError):
        diversity(np.empty((0, 2)), SearchSpace.box(0, 1, 2))


def test_diversity_scale_invariance():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n, d = rng.integers(1, 20), rng.integers(1, 6)
        lo, hi = -rng.random(d) - 0.1, rng.random(d) + 0.1
        X = lo + rng.random((n, d)) * (hi - lo)
        c = 10 ** rng.uniform(-3, 3)
        a = diversity(X, SearchSpace(lo, hi))
        b = diversity(c * X, SearchSpace(c * lo, c * hi))
        assert abs(a - b) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_diversity_nonneg_and_permutation(n, d, seed):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1, 1, (n, d))
    sp = SearchSpace.box(-1, 1, d)
    v = diversity(X, sp)
    assert v >= 0
    assert diversity(X[rng.permutation(n)], sp) == pytest.approx(v, abs=1e-15)
    if n > 1 and np.ptp(X, axis=0).max() > 0:
        assert v > 0


# degree of diversity

def test_degree_identical():
    X = np.tile([0.2, 0.4, 0.6], (5, 1))
    assert degree_of_diversity(X, SearchSpace.box(0, 1, 3), bins=2) == (0, 3)


def test_degree_binary_example():
    X = np.array([[0.0, 1.0, 1.0], [0.0, 1.0, 0.0]])
    assert degree_of_diversity(X, SearchSpace.box(0, 1, 3), bins=2) == (1, 2)


def test_degree_spanning():
    X = np.array([[0.0] * 4, [1.0] * 4])
    assert degree_of_diversity(X, SearchSpace.box(0, 1, 4)) == (4, 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 20), st.integers(1, 6), st.integers(2, 16), st.integers(0, 2**32 - 1))
def test_degree_sums_to_dim(n, d, bins, seed):
    X = np.random.default_rng(seed).random((n, d))
    delta, mu = degree_of_diversity(X, SearchSpace.box(0, 1, d), bins)
    assert 0 <= delta <= d and delta + mu == d


def test_degree_bins_validation():
    with pytest.raises(ConfigError):
        degree_of_diversity(np.zeros((2, 1)), SearchSpace.box(0, 1, 1), bins=1)


# aggregation

def test_aggregate_one_to_thirty():
    st_ = aggregate_runs(np.arange(30, 0, -1, dtype=float))
    assert (st_.best, st_.r7, st_.median, st_.r22, st_.worst) == (1, 7, 15, 22, 30)
    assert st_.mean == 15.5
    assert st_.std == math.sqrt(sum((k - 15.5) ** 2 for k in range(1, 31)) / 29)


def test_aggregate_constant():
    st_ = aggregate_runs([0.25] * 8)
    assert st_.best == st_.median == st_.worst == st_.mean == 0.25
    assert st_.std == 0.0


def test_ranks():
    assert report_ranks(30) == (1, 7, 15, 22, 30)
    assert report_ranks(10) == (1, 2, 5, 7, 10)
    assert report_ranks(2) == (1, 1, 1, 1, 2)


def test_aggregate_too_few():
    with pytest.raises(ConfigError):
        aggregate_runs([1.0])


def test_aggregate_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        n = int(rng.integers(2, 60))
        errs = list(rng.exponential(1.0, n) * 10 ** rng.uniform(-8, 3))
        st_ = aggregate_runs(errs)
        s = sorted(errs)
        ranks = [min(max(int(k * n / 30 + 0.5), 1), n) for k in (1, 7, 15, 22, 30)]
        assert [st_.best, st_.r7, st_.median, st_.r22, st_.worst] == [s[r - 1] for r in ranks]
        mean = sum(s) / n
        std = math.sqrt(sum((v - mean) ** 2 for v in s) / (n - 1))
        assert st_.mean == pytest.approx(mean, rel=1e-12)
        assert st_.std == pytest.approx(std, rel=1e-12)


# t-test

@pytest.mark.parametrize("df", [10, 58, 78, 99])
@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 1.984, 3.0, 10.0])
def test_t_pvalue_oracle(t, df):
    assert abs(t_two_tailed_p(t, df) - t_pvalue_oracle(t, df)) <= 1e-6
    assert t_two_tailed_p(-t, df) == t_two_tailed_p(t, df)


def test_t_critical_value():
    assert t_two_tailed_p(1.984, 100) == pytest.approx(0.050, abs=5e-4)


def test_t_identical_samples():
    r = t_test_two_tailed([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert r.t_statistic == 0.0 and r.p_two_tailed == 1.0


def test_t_symmetry_and_scipy():
    from scipy import stats
    rng = np.random.default_rng(3)
    a, b = rng.normal(0, 1, 30), rng.normal(0.5, 2, 20)
    for mode, equal in (("pooled", True), ("welch", False)):
        ab, ba = t_test_two_tailed(a, b, mode), t_test_two_tailed(b, a, mode)
        assert ab.t_statistic == pytest.approx(-ba.t_statistic, rel=1e-14)
        assert ab.p_two_tailed == pytest.approx(ba.p_two_tailed, rel=1e-14)
        ref = stats.ttest_ind(a, b, equal_var=equal)
        assert ab.t_statistic == pytest.approx(ref.statistic, rel=1e-10)
        assert ab.p_two_tailed == pytest.approx(ref.pvalue, rel=1e-8)
    assert t_test_two_tailed(a, b).degrees_of_freedom == 48


def test_t_degenerate():
    r = t_test_two_tailed([0.0, 0.0], [0.0, 0.0])
    assert (r.t_statistic, r.p_two_tailed) == (0.0, 1.0)
    r = t_test_two_tailed([0.0, 0.0], [1.0, 1.0])
    assert r.p_two_tailed == 0.0 and r.t_statistic == -math.inf


def test_t_errors():
    with pytest.raises(ConfigError):
        t_test_two_tailed([1.0], [1.0, 2.0])
    with pytest.raises(ConfigError):
        t_test_two_tailed([1.0, 2.0], [1.0, 2.0], mode="paired")


# improvement-phase diversity

def trace(mean_fit, div):
    n = len(mean_fit)
    return np.column_stack([np.arange(n), np.zeros(n), mean_fit, div])


def test_ipd_monotone_constant():
    assert improvement_phase_diversity(trace(np.arange(20.0, 0, -1), np.full(20, 0.3))) == 0.3


def test_ipd_no_improvement():
    assert improvement_phase_diversity(trace(np.ones(15), np.full(15, 0.3))) == 0.0


def test_ipd_hand_trace():
    # g:     0   1  2  3  4  5  6  7  8  9 10 11
    mf = [10, 11, 9, 8, 7, 6, 5, 6, 4, 3, 3, 5]
    div = np.arange(12) / 100.0
    got = improvement_phase_diversity(trace(mf, div), window=5)
    assert got == pytest.approx((0.06 + 0.08 + 0.09) / 3, abs=1e-15)
