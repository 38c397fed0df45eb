"""
Reference scoring models built on scikit-learn.

- KnnProbabilityModel: fraction of positive labels among the k nearest
  training points. Piecewise constant, rough decision surface.
- RbfLogisticModel: random Fourier features followed by logistic regression.
  Smooth decision surface.
"""
import hashlib
import logging

import numpy as np
from sklearn.kernel_approximation import RBFSampler
from sklearn.linear_model import LogisticRegression
from sklearn.neighbors import KNeighborsClassifier
from sklearn.pipeline import make_pipeline

from .. import settings
from ..core.types import Dataset
from ..exceptions import ModelError
from .base import ScoringModel

logger = logging.getLogger(__name__)

MODEL_KINDS = ('knn_probability', 'rbf_logistic')


def dataset_fingerprint(dataset: Dataset) -> str:
    """SHA-256 over the standardized points and labels."""
    digest = hashlib.sha256()
    digest.update(np.ascontiguousarray(dataset.points, dtype='<f8').tobytes())
    digest.update(np.ascontiguousarray(dataset.labels, dtype='<i8').tobytes())
    return digest.hexdigest()


class _SklearnModel(ScoringModel):
    def __init__(self, estimator, dim: int, fingerprint: str):
        super().__init__(dim, fingerprint)
        self.estimator = estimator
        classes = list(estimator.classes_)
        self._positive = classes.index(1)

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return self.estimator.predict_proba(X)[:, self._positive]


class KnnProbabilityModel(_SklearnModel):
    kind = 'knn_probability'

    def __init__(self, estimator, dim: int, fingerprint: str, n_neighbors: int):
        super().__init__(estimator, dim, fingerprint)
        self.n_neighbors = n_neighbors

    def metadata(self):
        return {**super().metadata(), 'n_neighbors': self.n_neighbors}


class RbfLogisticModel(_SklearnModel):
    kind = 'rbf_logistic'

    def __init__(self, estimator, dim: int, fingerprint: str, n_components: int, gamma: float, seed: int):
        super().__init__(estimator, dim, fingerprint)
        self.n_components = n_components
        self.gamma = gamma
        self.seed = seed

    def metadata(self):
        return {
            **super().metadata(),
            'n_components': self.n_components,
            'gamma': self.gamma,
            'seed': self.seed,
        }


def fit_reference_model(
    dataset: Dataset,
    kind: str = settings.MODEL_KIND,
    seed: int = settings.DEFAULT_SEED,
    n_neighbors: int = settings.KNN_MODEL_NEIGHBORS,
    n_components: int = settings.RBF_COMPONENTS,
    gamma: float = settings.RBF_GAMMA,
    C: float = settings.RBF_C,
) -> ScoringModel:
    """
    Fit one of the built-in reference models on standardized data.

    Args:
        dataset: Training data, both classes present
        kind: 'knn_probability' or 'rbf_logistic'
        seed: Random state for the RBF feature map

    Returns:
        Fitted ScoringModel

    Raises:
        ModelError: Single-class data or unknown kind
    """
    if kind not in MODEL_KINDS:
        raise ModelError(f"Unknown model kind '{kind}', expected one of {MODEL_KINDS}")
    present = set(np.unique(dataset.labels).tolist())
    if present != {0, 1}:
        raise ModelError(f"Training data must contain both classes, found {sorted(present)}")

    fingerprint = dataset_fingerprint(dataset)
    if kind == 'knn_probability':
        k = min(n_neighbors, dataset.n)
        estimator = KNeighborsClassifier(n_neighbors=k, algorithm='kd_tree')
        estimator.fit(dataset.points, dataset.labels)
        model = KnnProbabilityModel(estimator, dataset.d, fingerprint, k)
    else:
        estimator = make_pipeline(
            RBFSampler(gamma=gamma, n_components=n_components, random_state=seed),
            LogisticRegression(C=C, max_iter=2000),
        )
        estimator.fit(dataset.points, dataset.labels)
        model = RbfLogisticModel(estimator, dataset.d, fingerprint, n_components, gamma, seed)

    accuracy = float(np.mean((model.score_many(dataset.points) >= 0.5) == dataset.labels))
    logger.info(f"Fitted {kind} model on n={dataset.n}, d={dataset.d}: training accuracy {accuracy:.4f}")
    return model
