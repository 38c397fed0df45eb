from .artifacts import ModelArtifact
from .base import CallableModel, ReversedModel, ScoringModel, classify, for_target_class
from .reference import (
    MODEL_KINDS,
    KnnProbabilityModel,
    RbfLogisticModel,
    dataset_fingerprint,
    fit_reference_model,
)

__all__ = [
    'CallableModel', 'KnnProbabilityModel', 'MODEL_KINDS', 'ModelArtifact', 'RbfLogisticModel',
    'ReversedModel', 'ScoringModel', 'classify', 'dataset_fingerprint', 'fit_reference_model',
    'for_target_class',
]
