"""
Argument parsing helpers shared by the subcommands.
"""
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.preprocessing import apply_standardization
from ..core.types import Dataset, FeatureSchema, Instance
from ..datasets.csvio import load_csv
from ..exceptions import UsageError
from ..models.artifacts import ModelArtifact


def parse_names(values: Optional[Sequence[str]]) -> List[str]:
    """'a,b' 'c' -> ['a', 'b', 'c']"""
    names: List[str] = []
    for value in values or []:
        names.extend(v.strip() for v in value.split(',') if v.strip())
    return names


def parse_bounded(values: Optional[Sequence[str]]) -> Dict[str, Tuple[float, float]]:
    """'name:lower:upper' entries, raw units."""
    bounds = {}
    for value in values or []:
        parts = value.rsplit(':', 2)
        if len(parts) != 3:
            raise UsageError(f"--bounded expects name:lower:upper, got '{value}'")
        name, lower, upper = parts
        try:
            lo, hi = float(lower), float(upper)
        except ValueError:
            raise UsageError(f"--bounded bounds must be numbers, got '{value}'") from None
        if not lo <= 0.0 <= hi:
            raise UsageError(f"--bounded needs lower <= 0 <= upper, got '{value}'")
        bounds[name] = (lo, hi)
    return bounds


def parse_point(value: str, dataset: Dataset, flag: str) -> Instance:
    """A row index (plain integer) or a comma list of raw feature values."""
    text = value.strip()
    if ',' not in text:
        try:
            row = int(text)
        except ValueError:
            row = None
        if row is not None:
            return dataset.instance(row)
    try:
        raw = [float(v) for v in text.split(',')]
    except ValueError:
        raise UsageError(f"{flag}: expected a row index or comma-separated numbers, got '{value}'") from None
    if len(raw) != dataset.d:
        raise UsageError(f"{flag}: expected {dataset.d} values, got {len(raw)}")
    return Instance(apply_standardization(np.array(raw), dataset.schema)[0])


def load_artifact_dataset(data_path: str, artifact: ModelArtifact) -> Dataset:
    """Read a CSV and standardize it with the schema stored in the model artifact."""
    raw, labels, names = load_csv(data_path, artifact.label_column)
    if names != artifact.schema.names:
        raise UsageError(f"CSV features {names} do not match model features {artifact.schema.names}")
    return Dataset(apply_standardization(raw, artifact.schema), labels, artifact.schema)


def constrained_schema(schema: FeatureSchema, immutable, bounded) -> FeatureSchema:
    names = parse_names(immutable)
    bounds = parse_bounded(bounded)
    if not names and not bounds:
        return schema
    return schema.with_constraints(immutable=names, bounded=bounds)
