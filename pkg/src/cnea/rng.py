"""Seeded random streams.

Every stochastic routine takes an explicit :class:`numpy.random.Generator`.
Per-run seeds are derived from a master seed and the run's coordinates so
that runs can execute in any order, or in parallel, and still reproduce.
"""

import numpy as np

ALGORITHM_IDS = ("cnea", "sea", "socea", "cea", "dgea")
FUNCTION_IDS = ("ack", "gri", "rtg", "ros", "elp", "sch12", "rrtg")


def check_rng(seed=None):
    """Turn ``None``, an int or a Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (int, np.integer)):
        return np.random.default_rng(seed)
    raise TypeError(f"cannot build a random generator from {seed!r}")


def derive_seed(master_seed, algorithm, function, dim, run):
    """64-bit seed for one run, keyed on (algorithm, function, dim, run)."""
    key = (ALGORITHM_IDS.index(algorithm), FUNCTION_IDS.index(function), int(dim), int(run))
    ss = np.random.SeedSequence(entropy=int(master_seed) % 2**64, spawn_key=key)
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)
