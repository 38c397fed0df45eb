"""
Maximum angle of deviation.

A step from x1 towards xt stays within epsilon of the known points x1 and
x2 when the angle between (x2 - x1) and (xt - x1) is small enough:

    cos(angle) >= (1 + d / epsilon) / 2,   d = |x2 - x1| <= 2 epsilon

together with |xt - x1| <= d + epsilon and |xt - x2| <= epsilon.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..core.types import Instance
from ..exceptions import GeometryError

logger = logging.getLogger(__name__)

COS_SLACK = 1e-12
FAST_PATH_RATIO = math.pi - 1.0


def _vector(x) -> np.ndarray:
    return x.values if isinstance(x, Instance) else np.asarray(x, dtype=float).reshape(-1)


@dataclass(frozen=True)
class DeviationCheck:
    epsilon: float
    admissible: bool
    cos_angle: float
    bound: float
    distance: float
    step_length: float
    end_gap: float


def cosine_alignment(v, u) -> float:
    """Normalized dot product clamped to [-1, 1]; a zero vector counts as aligned (1)."""
    v = _vector(v)
    u = _vector(u)
    nv = np.linalg.norm(v)
    nu = np.linalg.norm(u)
    if nv == 0.0 or nu == 0.0:
        return 1.0
    return float(np.clip(np.dot(v, u) / (nv * nu), -1.0, 1.0))


def deviation_bound(distance: float, epsilon: float) -> float:
    return 0.5 * (1.0 + distance / epsilon)


def max_deviation_ok(x1, x2, xt, epsilon: float) -> Tuple[bool, DeviationCheck]:
    """
    Args:
        x1: Anchor the segment starts from
        x2: Known point the segment heads toward
        xt: Proposed segment end
        epsilon: Deviation tolerance

    Returns:
        (admissible, DeviationCheck)

    Raises:
        GeometryError: |x2 - x1| > 2 epsilon, or xt == x1
    """
    if not epsilon > 0:
        raise GeometryError(f"epsilon must be > 0, got {epsilon}")
    a, b, t = _vector(x1), _vector(x2), _vector(xt)
    d = float(np.linalg.norm(b - a))
    if d > 2.0 * epsilon:
        raise GeometryError(f"Hypothesis violated: |x2 - x1| = {d:.6g} > 2 epsilon = {2 * epsilon:.6g}")
    step = t - a
    length = float(np.linalg.norm(step))
    if length == 0.0:
        raise GeometryError("xt coincides with x1")
    phi = cosine_alignment(b - a, step)
    bound = deviation_bound(d, epsilon)
    gap = float(np.linalg.norm(t - b))
    admissible = phi >= bound - COS_SLACK and length <= d + epsilon and gap <= epsilon
    return admissible, DeviationCheck(epsilon, admissible, phi, bound, d, length, gap)


def fast_path_ok(x1, x2, xt, epsilon: float) -> bool:
    """d / epsilon <= pi - 1 and |xt - x2| <= epsilon."""
    a, b, t = _vector(x1), _vector(x2), _vector(xt)
    d = float(np.linalg.norm(b - a))
    return d / epsilon <= FAST_PATH_RATIO and float(np.linalg.norm(t - b)) <= epsilon


def segment_covered(x1, x2, xt, epsilon: float, samples: int = 1000, tol: float = 1e-9) -> bool:
    """Every sampled point of x1 -> xt lies within epsilon of x1 or x2."""
    a, b, t = _vector(x1), _vector(x2), _vector(xt)
    s = np.linspace(0.0, 1.0, samples)[:, None]
    pts = a + s * (t - a)
    near = np.minimum(np.linalg.norm(pts - a, axis=1), np.linalg.norm(pts - b, axis=1))
    return bool(np.all(near <= epsilon + tol))
