from .config import ExplainerConfig
from .preprocessing import apply_standardization, build_dataset, inverse_standardize, standardize, steps_to_raw
from .types import (
    Dataset,
    FeatureConstraint,
    FeatureSchema,
    FeatureSpec,
    Instance,
    LocalGraph,
    PrivacyLedger,
    RecourseMatrix,
    RecourseResult,
    STAGES,
)

__all__ = [
    'Dataset', 'ExplainerConfig', 'FeatureConstraint', 'FeatureSchema', 'FeatureSpec',
    'Instance', 'LocalGraph', 'PrivacyLedger', 'RecourseMatrix', 'RecourseResult', 'STAGES',
    'apply_standardization', 'build_dataset', 'inverse_standardize', 'standardize', 'steps_to_raw',
]
