"""
Z-score standardization with population standard deviation.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import DataFormatError, DimensionMismatchError
from .types import Dataset, FeatureSchema, FeatureSpec, Instance

logger = logging.getLogger(__name__)


def standardize(
    raw_points,
    names: Optional[Sequence[str]] = None,
) -> Tuple[np.ndarray, FeatureSchema]:
    """
    Standardize each column to zero mean and unit (population) variance.

    Args:
        raw_points: n x d matrix of raw values
        names: Optional feature names, defaults to x0..x{d-1}

    Returns:
        (standardized n x d matrix, FeatureSchema holding means and std devs)

    Raises:
        DataFormatError: Non-finite input, naming the first offending column
    """
    raw = np.array(raw_points, dtype=float)
    if raw.ndim != 2 or raw.shape[0] < 1 or raw.shape[1] < 1:
        raise DimensionMismatchError(f"Expected an n x d matrix with n, d >= 1, got shape {raw.shape}")
    n, d = raw.shape
    names = list(names) if names is not None else [f"x{i}" for i in range(d)]
    if len(names) != d:
        raise DimensionMismatchError(f"{len(names)} names for {d} columns")

    finite = np.isfinite(raw)
    if not finite.all():
        col = int(np.where(~finite.all(axis=0))[0][0])
        row = int(np.where(~finite[:, col])[0][0])
        raise DataFormatError(
            f"Non-finite value in column {col} ('{names[col]}')",
            row=row + 1,
            column=col,
        )

    means = raw.mean(axis=0)
    stds = raw.std(axis=0)
    constant = stds == 0.0
    stds = np.where(constant, 1.0, stds)
    if constant.any():
        logger.warning(f"Constant columns kept with std_dev = 1: {[names[i] for i in np.where(constant)[0]]}")

    schema = FeatureSchema(tuple(
        FeatureSpec(names[i], float(means[i]), float(stds[i]), constant=bool(constant[i]))
        for i in range(d)
    ))
    return (raw - means) / stds, schema


def apply_standardization(raw_points, schema: FeatureSchema) -> np.ndarray:
    """Standardize new raw rows with an existing schema."""
    raw = np.atleast_2d(np.array(raw_points, dtype=float))
    if raw.shape[1] != schema.dim:
        raise DimensionMismatchError(f"Expected {schema.dim} columns, got {raw.shape[1]}")
    if not np.isfinite(raw).all():
        raise DataFormatError("Non-finite raw values")
    return (raw - schema.means) / schema.std_devs


def inverse_standardize(point, schema: FeatureSchema) -> np.ndarray:
    """Map a standardized Instance (or vector) back to raw units."""
    values = point.values if isinstance(point, Instance) else np.asarray(point, dtype=float)
    if values.shape[-1] != schema.dim:
        raise DimensionMismatchError(f"Expected dimension {schema.dim}, got {values.shape[-1]}")
    return values * schema.std_devs + schema.means


def steps_to_raw(steps: np.ndarray, schema: FeatureSchema) -> np.ndarray:
    """Step vectors are differences, so only the scale applies."""
    steps = np.asarray(steps, dtype=float).reshape(-1, schema.dim)
    return steps * schema.std_devs


def build_dataset(raw_points, labels, names: Optional[Sequence[str]] = None) -> Dataset:
    """Standardize raw rows and wrap them with their labels."""
    points, schema = standardize(raw_points, names)
    return Dataset(points, labels, schema)
