"""
Model artifact files written by `fit` and read by `explain`.
"""
import logging
import pickle
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Union

from ..core.types import FeatureSchema
from ..exceptions import ModelError
from .base import ScoringModel

logger = logging.getLogger(__name__)

ARTIFACT_VERSION = 1


@dataclass
class ModelArtifact:
    """A fitted model together with the schema its inputs were standardized with."""
    model: ScoringModel
    schema: FeatureSchema
    kind: str
    seed: int
    label_column: str
    fingerprint: str
    extra: Dict = field(default_factory=dict)
    version: int = ARTIFACT_VERSION

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'wb') as f:
            pickle.dump(self, f)
        logger.info(f"Saved {self.kind} model artifact to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'ModelArtifact':
        with open(path, 'rb') as f:
            artifact = pickle.load(f)
        if not isinstance(artifact, cls):
            raise ModelError(f"{path} is not a model artifact")
        if artifact.version != ARTIFACT_VERSION:
            raise ModelError(f"{path}: unsupported artifact version {artifact.version}")
        return artifact
