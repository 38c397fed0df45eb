"""
Synthetic datasets for demonstrations and tests.
"""
from typing import List, Tuple

import numpy as np
from sklearn.datasets import make_blobs, make_moons

from .. import settings
from ..exceptions import ConfigError


def generate_two_moons(
    n: int,
    noise: float = 0.15,
    seed: int = settings.DEFAULT_SEED,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Two interleaving unit half-circles, the second offset by (1.0, 0.5).

    Class 0 is the upper arc x^2 + y^2 = 1 (floor(n/2) points), class 1 the
    lower one (ceil(n/2) points). Gaussian noise of std `noise` is added.
    """
    if n < 2:
        raise ConfigError(f"two moons needs n >= 2, got {n}")
    if noise < 0:
        raise ConfigError(f"noise must be >= 0, got {noise}")
    X, y = make_moons(n_samples=n, noise=noise, random_state=seed, shuffle=True)
    return X, y.astype(int)


def generate_blobs(
    n: int,
    d: int = 2,
    cluster_std: float = 1.0,
    seed: int = settings.DEFAULT_SEED,
) -> Tuple[np.ndarray, np.ndarray]:
    """Two isotropic Gaussian blobs, one per class."""
    if n < 2:
        raise ConfigError(f"blobs needs n >= 2, got {n}")
    if d < 1:
        raise ConfigError(f"blobs needs d >= 1, got {d}")
    X, y = make_blobs(n_samples=n, n_features=d, centers=2, cluster_std=cluster_std, random_state=seed)
    return X, y.astype(int)


def add_group_column(raw: np.ndarray, seed: int = settings.DEFAULT_SEED) -> np.ndarray:
    """Append a random binary 'group' feature (a protected-attribute stand-in)."""
    rng = np.random.default_rng(seed)
    group = rng.integers(0, 2, size=raw.shape[0]).astype(float)
    return np.column_stack([raw, group])


def feature_names(d: int, group: bool = False) -> List[str]:
    names = [f"x{i}" for i in range(d)]
    if group:
        names[-1] = 'group'
    return names
