"""
Feature actionability: immutable and bounded features, relative to the factual.
"""
from typing import List, Sequence

import numpy as np

from .types import BOUNDED, IMMUTABLE, FeatureSchema, Instance

BOUND_TOLERANCE = 1e-9


def _bounds(factual: Instance, schema: FeatureSchema):
    lower = np.full(schema.dim, -np.inf)
    upper = np.full(schema.dim, np.inf)
    immutable = np.zeros(schema.dim, dtype=bool)
    for i, c in enumerate(schema.constraints):
        if c.kind == IMMUTABLE:
            immutable[i] = True
        elif c.kind == BOUNDED:
            lower[i] = factual.values[i] + c.lower_delta
            upper[i] = factual.values[i] + c.upper_delta
    return immutable, lower, upper


def feasible_mask(points, factual: Instance, schema: FeatureSchema) -> np.ndarray:
    """Boolean mask over the rows of `points` that respect every constraint."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if not schema.has_constraints:
        return np.ones(points.shape[0], dtype=bool)
    immutable, lower, upper = _bounds(factual, schema)
    ok = np.all(points[:, immutable] == factual.values[immutable], axis=1)
    ok &= np.all(points >= lower - BOUND_TOLERANCE, axis=1)
    ok &= np.all(points <= upper + BOUND_TOLERANCE, axis=1)
    return ok


def apply_constraints(candidates: Sequence, factual: Instance, schema: FeatureSchema) -> List:
    """
    Drop candidates that change an immutable feature or leave a bounded range.

    Args:
        candidates: Sequence of (point, id, ...) tuples, e.g. index Neighbors
        factual: Reference instance for the deltas
        schema: Feature schema carrying the constraints

    Returns:
        The feasible candidates, order preserved
    """
    if not candidates or not schema.has_constraints:
        return list(candidates)
    mask = feasible_mask(np.vstack([c[0] for c in candidates]), factual, schema)
    return [c for c, keep in zip(candidates, mask) if keep]


def project(point, factual: Instance, schema: FeatureSchema) -> np.ndarray:
    """Pin immutable features to the factual and clip bounded ones into range."""
    point = np.array(point, dtype=float)
    if not schema.has_constraints:
        return point
    immutable, lower, upper = _bounds(factual, schema)
    point[immutable] = factual.values[immutable]
    return np.clip(point, lower, upper)
