"""
KD-tree over the training points with per-session deactivation.

The cKDTree itself is shared and read-only. Each explanation stage works on
a `view()`: a private active mask over the same tree. Deactivated points are
tombstoned, and a view rebuilds a compact private tree once more than half
of its tree members are dead.
"""
import logging
from typing import Iterable, List, NamedTuple, Optional

import numpy as np
from scipy.spatial import cKDTree

from ..core.types import Instance
from ..exceptions import ConfigError, DimensionMismatchError, IndexExhaustedError, UnknownPointError

logger = logging.getLogger(__name__)

REBUILD_DEAD_FRACTION = 0.5
_TIE_SLACK = 1e-9


class Neighbor(NamedTuple):
    point: np.ndarray
    id: int
    distance: float


class SpatialIndex:
    """
    Args:
        points: n x d matrix; row i gets id i
    """

    def __init__(self, points):
        points = np.array(points, dtype=float)
        if points.ndim != 2 or points.shape[0] < 1:
            raise ConfigError(f"SpatialIndex needs at least one point, got shape {points.shape}")
        points.setflags(write=False)
        self.points = points
        self.n, self.d = points.shape
        self._tree = cKDTree(points)
        self._tree_ids = np.arange(self.n)
        # full tree over every row; views start from it even after a rebuild
        self._base_tree = self._tree
        self._active = np.ones(self.n, dtype=bool)
        self._n_active = self.n

    @classmethod
    def build(cls, points) -> 'SpatialIndex':
        return cls(points)

    def view(self, exclude: Iterable[int] = ()) -> 'SpatialIndex':
        """Fresh session-local view over the full tree, all points active except `exclude`."""
        other = object.__new__(SpatialIndex)
        other.points = self.points
        other.n, other.d = self.n, self.d
        other._tree = other._base_tree = self._base_tree
        other._tree_ids = np.arange(self.n)
        other._active = np.ones(self.n, dtype=bool)
        other._n_active = self.n
        for i in exclude:
            if i is not None and other.is_active(i):
                other.deactivate(i)
        return other

    @property
    def active_count(self) -> int:
        return self._n_active

    def is_active(self, id: int) -> bool:
        return 0 <= id < self.n and bool(self._active[id])

    def active_ids(self) -> np.ndarray:
        return np.flatnonzero(self._active)

    def _vector(self, x) -> np.ndarray:
        v = x.values if isinstance(x, Instance) else np.asarray(x, dtype=float).reshape(-1)
        if v.shape[0] != self.d:
            raise DimensionMismatchError(f"Index dimension is {self.d}, query has {v.shape[0]}")
        return v

    def _ordered(self, ids: np.ndarray, v: np.ndarray) -> List[Neighbor]:
        dist = np.linalg.norm(self.points[ids] - v, axis=1)
        order = np.lexsort((ids, dist))
        return [Neighbor(self.points[ids[i]], int(ids[i]), float(dist[i])) for i in order]

    def _ball(self, v: np.ndarray, radius: float) -> np.ndarray:
        rows = self._tree.query_ball_point(v, radius * (1.0 + _TIE_SLACK) + 1e-12)
        ids = self._tree_ids[np.asarray(rows, dtype=int)]
        return ids[self._active[ids]]

    def knn(self, x, k: int) -> List[Neighbor]:
        """
        min(k, active) nearest active points, ascending distance, ties by lower id.

        Raises:
            IndexExhaustedError: No active points remain
        """
        if k < 1:
            raise ConfigError(f"k must be >= 1, got {k}")
        if self._n_active == 0:
            raise IndexExhaustedError("No active points remain in the index")
        v = self._vector(x)
        k_eff = min(k, self._n_active)
        members = len(self._tree_ids)
        dead = members - self._n_active
        kq = min(k_eff + dead, members)
        dist, rows = self._tree.query(v, k=kq)
        dist = np.atleast_1d(dist)
        rows = np.atleast_1d(rows)
        live = self._active[self._tree_ids[rows]]
        kth = float(dist[live][k_eff - 1])
        # gather everything tied with the k-th distance, then order exactly
        ids = self._ball(v, kth)
        return self._ordered(ids, v)[:k_eff]

    def radius_query(self, x, radius: float) -> List[Neighbor]:
        """All active points within `radius` (inclusive), ascending distance."""
        if not radius > 0:
            raise ConfigError(f"radius must be > 0, got {radius}")
        v = self._vector(x)
        if self._n_active == 0:
            return []
        ids = self._ball(v, radius)
        return [nb for nb in self._ordered(ids, v) if nb.distance <= radius]

    def deactivate(self, id: int) -> None:
        """
        Raises:
            UnknownPointError: id unknown or already deactivated
        """
        if not 0 <= id < self.n:
            raise UnknownPointError(f"Unknown point id {id}")
        if not self._active[id]:
            raise UnknownPointError(f"Point {id} is already deactivated")
        self._active[id] = False
        self._n_active -= 1
        members = len(self._tree_ids)
        if self._n_active and (members - self._n_active) > REBUILD_DEAD_FRACTION * members:
            self._rebuild()

    def _rebuild(self) -> None:
        ids = self.active_ids()
        logger.debug(f"Rebuilding index view over {len(ids)} of {self.n} points")
        self._tree = cKDTree(self.points[ids])
        self._tree_ids = ids

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"SpatialIndex(n={self.n}, d={self.d}, active={self._n_active})"
