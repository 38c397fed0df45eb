"""
Scoring model contract.

Any object exposing `score_many(X) -> scores in [0, 1]` over standardized
rows plugs into the pipeline; the reference models in `reference.py` are
two such implementations.
"""
from abc import ABC, abstractmethod
from typing import Dict, Union

import numpy as np

from ..core.types import Instance
from ..exceptions import DimensionMismatchError, ModelError

ArrayLike = Union[Instance, np.ndarray]


class ScoringModel(ABC):
    """Black-box decision function f: standardized feature space -> [0, 1]."""

    kind: str = 'external'

    def __init__(self, dim: int, fingerprint: str = ''):
        self.dim = int(dim)
        self.fingerprint = fingerprint

    @abstractmethod
    def _predict(self, X: np.ndarray) -> np.ndarray:
        """Positive-class scores for an m x d matrix."""

    def _as_matrix(self, X) -> np.ndarray:
        if isinstance(X, Instance):
            X = X.values
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise DimensionMismatchError(f"Model expects dimension {self.dim}, got {X.shape[1]}")
        return X

    def score_many(self, X) -> np.ndarray:
        X = self._as_matrix(X)
        if X.shape[0] == 0:
            return np.zeros(0)
        scores = np.asarray(self._predict(X), dtype=float).reshape(-1)
        if not np.all(np.isfinite(scores)):
            raise ModelError(f"{self.kind} model produced non-finite scores")
        return np.clip(scores, 0.0, 1.0)

    def score(self, x: ArrayLike) -> float:
        return float(self.score_many(x)[0])

    def metadata(self) -> Dict:
        return {'kind': self.kind, 'dim': self.dim, 'fingerprint': self.fingerprint}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim})"


class ReversedModel(ScoringModel):
    """1 - f, for seeking the negative class with the same pipeline."""

    def __init__(self, inner: ScoringModel):
        super().__init__(inner.dim, inner.fingerprint)
        self.inner = inner
        self.kind = f"reversed:{inner.kind}"

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return 1.0 - self.inner.score_many(X)


class CallableModel(ScoringModel):
    """Wrap a plain function of an m x d matrix."""

    def __init__(self, fn, dim: int, kind: str = 'callable'):
        super().__init__(dim)
        self.fn = fn
        self.kind = kind

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return self.fn(X)


def classify(model: ScoringModel, x: ArrayLike, decision_threshold: float) -> int:
    """1 iff score(x) >= T_f."""
    return int(model.score(x) >= decision_threshold)


def for_target_class(model: ScoringModel, target_class: int) -> ScoringModel:
    return model if target_class == 1 else ReversedModel(model)
