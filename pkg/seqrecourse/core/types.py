"""
Domain types shared by every stage: points, feature schema, datasets,
recourse matrices, the local graph, the privacy ledger and the result record.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from ..exceptions import ConfigError, DataFormatError, DimensionMismatchError, SeqRecourseError

logger = logging.getLogger(__name__)

STAGES = ('explore', 'exploit', 'enhance')

IMMUTABLE = 'immutable'
BOUNDED = 'bounded'
FREE = 'free'


def _as_vector(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """
    A point in standardized feature space.

    `id` is the training row the point came from; synthetic points
    (search positions, externally supplied values) carry None.
    """
    values: np.ndarray
    id: Optional[int] = None

    def __post_init__(self):
        arr = _as_vector(self.values)
        if arr.size == 0:
            raise DimensionMismatchError("Instance needs at least one feature")
        if not np.all(np.isfinite(arr)):
            raise DataFormatError("Instance values must be finite")
        object.__setattr__(self, 'values', arr)

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def distance_to(self, other: 'Instance') -> float:
        return float(np.linalg.norm(self.values - other.values))

    def check_dim(self, d: int) -> None:
        if self.dim != d:
            raise DimensionMismatchError(f"Expected dimension {d}, got {self.dim}")

    def __repr__(self) -> str:
        return f"Instance(id={self.id}, values={np.array2string(self.values, precision=4)})"


@dataclass(frozen=True)
class FeatureConstraint:
    """Mutability of one feature; bounded deltas are standardized and factual-relative."""
    kind: str = FREE
    lower_delta: float = 0.0
    upper_delta: float = 0.0

    def __post_init__(self):
        if self.kind not in (IMMUTABLE, BOUNDED, FREE):
            raise ConfigError(f"Unknown constraint kind: {self.kind}")
        if self.kind == BOUNDED and not (self.lower_delta <= 0.0 <= self.upper_delta):
            raise ConfigError(
                f"Bounded deltas must satisfy lower <= 0 <= upper, got "
                f"[{self.lower_delta}, {self.upper_delta}]"
            )

    @classmethod
    def immutable(cls) -> 'FeatureConstraint':
        return cls(IMMUTABLE)

    @classmethod
    def bounded(cls, lower_delta: float, upper_delta: float) -> 'FeatureConstraint':
        return cls(BOUNDED, float(lower_delta), float(upper_delta))


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    mean: float
    std_dev: float
    constraint: FeatureConstraint = field(default_factory=FeatureConstraint)
    constant: bool = False

    def __post_init__(self):
        if not self.std_dev > 0:
            raise DataFormatError(
                f"Feature '{self.name}' needs std_dev > 0, got {self.std_dev}", column=self.name,
            )


@dataclass(frozen=True)
class FeatureSchema:
    """Per-feature names, standardization parameters and mutability constraints."""
    features: Tuple[FeatureSpec, ...]

    @property
    def dim(self) -> int:
        return len(self.features)

    @property
    def names(self) -> List[str]:
        return [f.name for f in self.features]

    @property
    def means(self) -> np.ndarray:
        return np.array([f.mean for f in self.features], dtype=float)

    @property
    def std_devs(self) -> np.ndarray:
        return np.array([f.std_dev for f in self.features], dtype=float)

    @property
    def constraints(self) -> List[FeatureConstraint]:
        return [f.constraint for f in self.features]

    @property
    def has_constraints(self) -> bool:
        return any(c.kind != FREE for c in self.constraints)

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DataFormatError(f"Unknown feature name: '{name}'", column=name) from None

    def with_constraints(
        self,
        immutable: Iterable[str] = (),
        bounded: Optional[Mapping[str, Tuple[float, float]]] = None,
    ) -> 'FeatureSchema':
        """
        Return a copy with constraints attached.

        Args:
            immutable: Feature names that may not change
            bounded: name -> (lower, upper) allowed change in RAW units,
                converted here to standardized deltas

        Returns:
            New FeatureSchema
        """
        features = list(self.features)
        for name in immutable:
            i = self.index_of(name)
            features[i] = replace(features[i], constraint=FeatureConstraint.immutable())
        for name, (lower, upper) in (bounded or {}).items():
            i = self.index_of(name)
            std = features[i].std_dev
            features[i] = replace(
                features[i],
                constraint=FeatureConstraint.bounded(lower / std, upper / std),
            )
        return FeatureSchema(tuple(features))

    @classmethod
    def free(cls, d: int, names: Optional[Sequence[str]] = None) -> 'FeatureSchema':
        """Identity standardization, no constraints."""
        names = list(names) if names is not None else [f"x{i}" for i in range(d)]
        return cls(tuple(FeatureSpec(n, 0.0, 1.0) for n in names))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Standardized training data: n x d points, binary labels and the schema."""
    points: np.ndarray
    labels: np.ndarray
    schema: FeatureSchema

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise DimensionMismatchError(f"Dataset needs an n x d matrix with n, d >= 1, got {points.shape}")
        labels = np.array(self.labels).reshape(-1).astype(int)
        if labels.shape[0] != points.shape[0]:
            raise DimensionMismatchError(
                f"labels length {labels.shape[0]} != number of points {points.shape[0]}"
            )
        if not np.isin(labels, (0, 1)).all():
            raise DataFormatError("labels must be in {0, 1}")
        if self.schema.dim != points.shape[1]:
            raise DimensionMismatchError(f"schema has {self.schema.dim} features, data has {points.shape[1]}")
        points.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'labels', labels)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def d(self) -> int:
        return int(self.points.shape[1])

    def instance(self, row: int) -> Instance:
        if not 0 <= row < self.n:
            raise DataFormatError(f"Row index {row} out of range [0, {self.n})", row=row)
        return Instance(self.points[row], id=int(row))

    def with_schema(self, schema: FeatureSchema) -> 'Dataset':
        return Dataset(self.points, self.labels, schema)


@dataclass(frozen=True, eq=False)
class RecourseMatrix:
    """
    Ordered step vectors z_1..z_k taking `origin` to the counterfactual.
    """
    origin: Instance
    steps: np.ndarray

    def __post_init__(self):
        steps = np.array(self.steps, dtype=float).reshape(-1, self.origin.dim)
        if steps.shape[0] and np.any(np.all(steps == 0.0, axis=1)):
            raise SeqRecourseError("Recourse steps must not be all-zero vectors")
        steps.setflags(write=False)
        object.__setattr__(self, 'steps', steps)

    @property
    def k(self) -> int:
        return int(self.steps.shape[0])

    def reconstruct(self) -> np.ndarray:
        """x' = x + sum(z_i)."""
        return self.origin.values + self.steps.sum(axis=0)

    def cumulative(self) -> np.ndarray:
        """Positions after each step, origin first ((k + 1) x d)."""
        return np.vstack([self.origin.values, self.origin.values + np.cumsum(self.steps, axis=0)])

    @classmethod
    def empty(cls, origin: Instance) -> 'RecourseMatrix':
        return cls(origin, np.zeros((0, origin.dim)))


class LocalGraph:
    """
    Undirected weighted graph over locally collected vertices.

    Vertex 0 is the factual; once complete the last vertex is the
    counterfactual. A missing edge encodes a zero weight.
    """

    def __init__(self):
        self.vertices: List[Instance] = []
        self.graph = nx.Graph(name="local_graph")

    def add_vertex(self, instance: Instance, kind: str = 'data') -> int:
        idx = len(self.vertices)
        self.vertices.append(instance)
        self.graph.add_node(idx, training_id=instance.id, kind=kind)
        return idx

    def add_edge(self, i: int, j: int, weight: float, **attrs) -> None:
        if i == j:
            raise SeqRecourseError("Self-edges are not allowed")
        if not weight > 0:
            raise SeqRecourseError(f"Edge weight must be positive, got {weight}")
        self.graph.add_edge(i, j, weight=float(weight), **attrs)

    def has_edge(self, i: int, j: int) -> bool:
        return self.graph.has_edge(i, j)

    def weight(self, i: int, j: int) -> float:
        return self.graph.edges[i, j]['weight']

    def edges(self) -> List[Tuple[int, int, dict]]:
        """Edges as (low, high, data) sorted by index pair."""
        out = [(min(i, j), max(i, j), data) for i, j, data in self.graph.edges(data=True)]
        return sorted(out, key=lambda e: (e[0], e[1]))

    def kind(self, i: int) -> str:
        return self.graph.nodes[i]['kind']

    @property
    def number_of_vertices(self) -> int:
        return len(self.vertices)

    @property
    def number_of_edges(self) -> int:
        return self.graph.number_of_edges()

    def training_ids(self) -> Set[int]:
        """Training ids of the vertices, the factual excluded."""
        return {
            v.id for i, v in enumerate(self.vertices)
            if v.id is not None and self.kind(i) != 'factual'
        }

    def connected(self, source: int, target: int) -> bool:
        return nx.has_path(self.graph, source, target)

    def __repr__(self) -> str:
        return f"LocalGraph({self.number_of_vertices} vertices, {self.number_of_edges} edges)"


class PrivacyLedger:
    """
    Which training ids each stage touched.

    The enhance stage reads the finished graph only, so its set must stay a
    subset of the exploit set.
    """

    def __init__(self, n_total: int):
        if n_total < 1:
            raise SeqRecourseError("n_total must be >= 1")
        self.n_total = int(n_total)
        self.accessed: Dict[str, Set[int]] = {stage: set() for stage in STAGES}
        self.sealed = False

    def record(self, stage: str, ids: Iterable[Optional[int]]) -> int:
        """
        Record ids touched by a stage.

        Returns:
            Number of ids that were new to this stage
        """
        if self.sealed:
            raise SeqRecourseError("Ledger is sealed")
        if stage not in self.accessed:
            raise SeqRecourseError(f"Unknown stage '{stage}'")
        ids = {int(i) for i in ids if i is not None}
        if stage == 'enhance' and not ids <= self.accessed['exploit']:
            raise SeqRecourseError("Enhance stage may only read ids already collected by exploit")
        before = len(self.accessed[stage])
        self.accessed[stage] |= ids
        return len(self.accessed[stage]) - before

    def union(self) -> Set[int]:
        out: Set[int] = set()
        for ids in self.accessed.values():
            out |= ids
        return out

    def fraction(self, stage: Optional[str] = None) -> float:
        ids = self.union() if stage is None else self.accessed[stage]
        return len(ids) / self.n_total

    def cumulative_fractions(self) -> Dict[str, float]:
        """Fraction of the training data touched after each stage, in stage order."""
        seen: Set[int] = set()
        out = {}
        for stage in STAGES:
            seen |= self.accessed[stage]
            out[stage] = len(seen) / self.n_total
        return out

    def seal(self) -> None:
        self.sealed = True

    def audit(self, stage: str) -> None:
        log_entry = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'stage': stage,
            'ids': sorted(self.accessed[stage]),
            'stage_fraction': self.fraction(stage),
            'total_fraction': self.fraction(),
        }
        logger.info(f"Ledger audit: {json.dumps(log_entry)}")

    def copy(self) -> 'PrivacyLedger':
        other = PrivacyLedger(self.n_total)
        other.accessed = {k: set(v) for k, v in self.accessed.items()}
        other.sealed = self.sealed
        return other


@dataclass(eq=False)
class RecourseResult:
    """Everything one explanation produced."""
    factual: Instance
    counterfactual: Instance
    recourse: RecourseMatrix
    graph: LocalGraph
    path: List[int]
    path_weight: float
    path_scores: List[float]
    path_densities: List[float]
    ledger: PrivacyLedger
    explore_trace: Optional[object] = None
    density_threshold: float = 0.0
    retried: bool = False

    @property
    def k(self) -> int:
        return self.recourse.k
