"""Input validation helpers shared by the optimizers and the harness."""

import numbers

import numpy as np
from sklearn.utils import check_scalar


class ConfigError(ValueError):
    """Raised for invalid parameters or configuration documents.

    ``key`` carries the dotted path of the offending entry when known.
    """

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


def check_param(value, name, target_type=numbers.Real, min_val=None, max_val=None,
                include_boundaries="both"):
    """``sklearn.utils.check_scalar`` that raises :class:`ConfigError`."""
    try:
        return check_scalar(value, name, target_type, min_val=min_val, max_val=max_val,
                            include_boundaries=include_boundaries)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), key=name) from None


def check_probability(value, name):
    return check_param(value, name, numbers.Real, min_val=0.0, max_val=1.0)


def check_genome(x, dim):
    """Return ``x`` as a finite float vector of length ``dim``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != dim:
        raise ValueError(f"expected a vector of length {dim}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("genome contains non-finite values")
    return x


def check_genomes(X, dim=None):
    """Return ``X`` as a finite 2-D float array, one genome per row."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D array of genomes, got {X.ndim}-D")
    if dim is not None and X.shape[1] != dim:
        raise ValueError(f"expected genomes of length {dim}, got {X.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise ValueError("genomes contain non-finite values")
    return X


def check_in_bounds(X, space):
    if np.any(X < space.lo) or np.any(X > space.hi):
        raise ValueError("genome outside the search space bounds")
