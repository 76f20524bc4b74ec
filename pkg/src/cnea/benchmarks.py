"""Benchmark objectives: Ackley, Griewank, Rastrigin, Rosenbrock,
hyper-ellipsoid, Schwefel 1.2 and rotated Rastrigin.

All are minimisation problems with global minimum 0. Every function accepts
a single genome or a 2-D batch (one genome per row).
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import ConfigError, check_genome, check_genomes, check_in_bounds
from .rng import FUNCTION_IDS

DEFAULT_BOUNDS = {
    "ack": 30.0,
    "gri": 600.0,
    "rtg": 5.12,
    "ros": 100.0,
    "elp": 5.12,
    "sch12": 100.0,
    "rrtg": 5.12,
}


@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Axis-aligned box ``lo <= x <= hi``."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float)).copy()
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float)).copy()
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size == 0:
            raise ValueError("lo and hi must be non-empty vectors of equal length")
        if not np.all(lo < hi):
            raise ValueError("every lower bound must be strictly below its upper bound")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def box(cls, lo, hi, dim):
        return cls(np.full(dim, float(lo)), np.full(dim, float(hi)))

    @property
    def dim(self):
        return self.lo.shape[0]

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def diagonal(self):
        """Length of the box diagonal."""
        return float(np.sqrt(np.sum(self.width ** 2)))

    def clip(self, X):
        return np.clip(X, self.lo, self.hi)

    def __eq__(self, other):
        return (isinstance(other, SearchSpace) and np.array_equal(self.lo, other.lo)
                and np.array_equal(self.hi, other.hi))

    __hash__ = None


def _ackley(X):
    n = X.shape[1]
    a = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(X ** 2, axis=1) / n))
    b = -np.exp(np.sum(np.cos(2.0 * np.pi * X), axis=1) / n)
    return a + b + 20.0 + np.e


def _griewank(X):
    i = np.arange(1, X.shape[1] + 1)
    return np.sum(X ** 2, axis=1) / 4000.0 - np.prod(np.cos(X / np.sqrt(i)), axis=1) + 1.0


def _rastrigin(X):
    return 10.0 * X.shape[1] + np.sum(X ** 2 - 10.0 * np.cos(2.0 * np.pi * X), axis=1)


def _rosenbrock(X):
    return np.sum(100.0 * (X[:, 1:] - X[:, :-1] ** 2) ** 2 + (1.0 - X[:, :-1]) ** 2, axis=1)


def _ellipsoid(X):
    i = np.arange(1, X.shape[1] + 1)
    return np.sum(i * X ** 2, axis=1)


def _schwefel12(X):
    return np.sum(np.cumsum(X, axis=1) ** 2, axis=1)


_FORMULAS = {
    "ack": _ackley,
    "gri": _griewank,
    "rtg": _rastrigin,
    "ros": _rosenbrock,
    "elp": _ellipsoid,
    "sch12": _schwefel12,
}


@dataclass(frozen=True, eq=False)
class ObjectiveFunction:
    id: str
    space: SearchSpace
    optimum_value: float = 0.0
    rotation: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self):
        return self.space.dim

    @property
    def optimizer(self):
        """A known global minimiser."""
        if self.id == "ros":
            return np.ones(self.dim)
        return np.zeros(self.dim)

    def __call__(self, x):
        return evaluate(self, x)


def default_space(function_id, dim):
    """Default search box for ``function_id`` at dimension ``dim``."""
    if function_id not in DEFAULT_BOUNDS:
        raise ConfigError(f"unknown function id {function_id!r}; expected one of {FUNCTION_IDS}")
    if int(dim) < 1:
        raise ConfigError("dimension must be positive", key="dim")
    b = DEFAULT_BOUNDS[function_id]
    return SearchSpace.box(-b, b, int(dim))


def make_rotation(dim, seed):
    """Seeded orthogonal matrix: Gaussian fill, modified Gram-Schmidt on the columns."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    Q = rng.standard_normal((dim, dim))
    for j in range(dim):
        for k in range(j):
            Q[:, j] -= (Q[:, k] @ Q[:, j]) * Q[:, k]
        Q[:, j] /= np.linalg.norm(Q[:, j])
    return Q


def make_function(function_id, dim, space=None, rotation_seed=0):
    """Build one of the seven benchmark objectives."""
    if space is None:
        space = default_space(function_id, dim)
    elif function_id not in DEFAULT_BOUNDS:
        raise ConfigError(f"unknown function id {function_id!r}")
    if space.dim != dim:
        raise ConfigError(f"search space has dim {space.dim}, expected {dim}")
    rotation = make_rotation(dim, rotation_seed) if function_id == "rrtg" else None
    return ObjectiveFunction(function_id, space, 0.0, rotation)


def evaluate_batch(fn, X):
    """Objective values for each row of ``X``."""
    X = check_genomes(X, fn.dim)
    check_in_bounds(X, fn.space)
    if fn.id == "rrtg":
        Q = np.eye(fn.dim) if fn.rotation is None else fn.rotation
        return _rastrigin(X @ Q.T)
    return _FORMULAS[fn.id](X)


def evaluate(fn, x):
    x = check_genome(x, fn.dim)
    return float(evaluate_batch(fn, x[None, :])[0])
