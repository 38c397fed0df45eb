"""
Gaussian kernel density estimate over the training points, plus the
line estimators used to gate and weight graph edges.

Densities are raw (not rescaled to [0, 1]); thresholds are taken as
quantiles of the training-point densities.
"""
import logging
from typing import Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from .. import settings
from ..core.types import Instance
from ..exceptions import ConfigError, DimensionMismatchError

logger = logging.getLogger(__name__)


def scott_bandwidth(n: int, d: int) -> float:
    return float(n ** (-1.0 / (d + 4)))


def _vector(x) -> np.ndarray:
    return x.values if isinstance(x, Instance) else np.asarray(x, dtype=float).reshape(-1)


class DensityModel:
    """
    f_p(x) = 1 / (n h^d (2 pi)^(d/2)) * sum_i exp(-|x - c_i|^2 / (2 h^2))
    """

    def __init__(self, centers, bandwidth: float, chunk_size: int = settings.KDE_CHUNK_SIZE):
        centers = np.array(centers, dtype=float)
        if centers.ndim != 2 or centers.shape[0] < 1:
            raise ConfigError(f"DensityModel needs at least one center, got shape {centers.shape}")
        if not bandwidth > 0:
            raise ConfigError(f"bandwidth must be > 0, got {bandwidth}")
        centers.setflags(write=False)
        self.centers = centers
        self.n, self.d = centers.shape
        self.bandwidth = float(bandwidth)
        self.normalization = 1.0 / (self.n * self.bandwidth ** self.d * (2.0 * np.pi) ** (self.d / 2.0))
        self.chunk_size = max(1, int(chunk_size))

    def density_many(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.d:
            raise DimensionMismatchError(f"Density model dimension is {self.d}, got {X.shape[1]}")
        out = np.empty(X.shape[0])
        scale = -0.5 / self.bandwidth ** 2
        for start in range(0, X.shape[0], self.chunk_size):
            block = X[start:start + self.chunk_size]
            sq = cdist(block, self.centers, metric='sqeuclidean')
            out[start:start + self.chunk_size] = np.exp(sq * scale).sum(axis=1)
        return out * self.normalization

    def density_at(self, x) -> float:
        return float(self.density_many(_vector(x))[0])

    def __repr__(self) -> str:
        return f"DensityModel(n={self.n}, d={self.d}, h={self.bandwidth:.4g})"


def kde_fit(points, bandwidth: Union[float, str] = 'auto') -> DensityModel:
    """
    Args:
        points: n x d kernel centers
        bandwidth: positive float, or 'auto' for Scott's rule n^(-1/(d+4))
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if bandwidth == 'auto':
        h = scott_bandwidth(*points.shape)
    else:
        h = float(bandwidth)
        if not h > 0:
            raise ConfigError(f"bandwidth must be > 0 or 'auto', got {bandwidth}")
    model = DensityModel(points, h)
    logger.debug(f"Fitted {model}")
    return model


def line_coefficients(q: int, endpoint_inclusive: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Weights (alpha_i, beta_i), i = 0..q, of the sample points alpha_i * a + beta_i * b.

    Default placement is ((q - i + 1)/(q + 1), i/(q + 1)): starts at a, stops
    one step short of b. `endpoint_inclusive` uses (1 - i/q, i/q).
    """
    if q < 2:
        raise ConfigError(f"line samples q must be >= 2, got {q}")
    i = np.arange(q + 1, dtype=float)
    if endpoint_inclusive:
        beta = i / q
        return 1.0 - beta, beta
    return (q - i + 1) / (q + 1), i / (q + 1)


def line_points(a, b, q: int, endpoint_inclusive: bool = False) -> np.ndarray:
    alpha, beta = line_coefficients(q, endpoint_inclusive)
    return np.outer(alpha, _vector(a)) + np.outer(beta, _vector(b))


def _rows(x) -> np.ndarray:
    return np.atleast_2d(x.values if isinstance(x, Instance) else np.asarray(x, dtype=float))


def line_profile(model, a, b, q: int, endpoint_inclusive: bool = False) -> np.ndarray:
    """
    Densities at the q+1 samples of each line a[j] -> b[j], shape m x (q+1).

    Either end may be a single point, broadcast against the other. Zero-length
    lines report density_at(a) at every sample.
    """
    A, B = np.broadcast_arrays(_rows(a), _rows(b))
    alpha, beta = line_coefficients(q, endpoint_inclusive)
    samples = alpha[None, :, None] * A[:, None, :] + beta[None, :, None] * B[:, None, :]
    dens = model.density_many(samples.reshape(-1, A.shape[1]))
    dens = np.array(dens, dtype=float).reshape(A.shape[0], q + 1)
    same = np.all(A == B, axis=1)
    if same.any():
        dens[same] = np.asarray(model.density_many(A[same]), dtype=float)[:, None]
    return dens


def line_average_density(model, a, b, q: int, endpoint_inclusive: bool = False) -> float:
    """Mean density over the q+1 line samples; a == b gives density_at(a)."""
    return float(line_profile(model, a, b, q, endpoint_inclusive)[0].mean())


def line_min_density(model, a, b, q: int, endpoint_inclusive: bool = False) -> float:
    """Smallest density over the same samples."""
    return float(line_profile(model, a, b, q, endpoint_inclusive)[0].min())


def density_quantile_threshold(model, points, quantile: float) -> float:
    """Given quantile of the densities at `points`, linear interpolation."""
    if not 0.0 < quantile < 1.0:
        raise ConfigError(f"quantile must be in (0, 1), got {quantile}")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] == 0:
        raise ConfigError("density_quantile_threshold needs at least one point")
    return float(np.quantile(model.density_many(points), quantile))
