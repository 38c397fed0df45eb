"""
Explore: find a counterfactual by momentum-guided greedy steps through the data.

Each iteration queries the k nearest active training points around the
current position x_t, picks the neighbor x* maximizing f(x_i) / (1 + |x_i - x_t|)
and moves to x_t + (x* - x_t + b_t) / 2, where b_t is the momentum. A step
is only taken when its segment stays within epsilon of known data; otherwise
the next-best neighbor is tried.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import ExplainerConfig
from ..core.constraints import apply_constraints, project
from ..core.types import FeatureSchema, Instance, PrivacyLedger
from ..exceptions import ConfigError, ExploreError, IndexExhaustedError
from ..geometry.deviation import fast_path_ok, max_deviation_ok
from ..models.base import ScoringModel
from ..spatial.index import Neighbor, SpatialIndex

logger = logging.getLogger(__name__)


@dataclass
class ExploreTrace:
    """Positions visited, the training id each step moved toward, momenta and scores."""
    positions: List[np.ndarray] = field(default_factory=list)
    selected_ids: List[int] = field(default_factory=list)
    momenta: List[np.ndarray] = field(default_factory=list)
    scores: List[float] = field(default_factory=list)
    rejected: List[int] = field(default_factory=list)

    @property
    def steps(self) -> np.ndarray:
        if len(self.positions) < 2:
            d = self.positions[0].shape[0] if self.positions else 0
            return np.zeros((0, d))
        return np.diff(np.vstack(self.positions), axis=0)

    @property
    def iterations(self) -> int:
        return len(self.selected_ids)


class ScoreCache:
    """At most one model call per training id within a session."""

    def __init__(self, model: ScoringModel):
        self.model = model
        self._scores: Dict[int, float] = {}
        self.calls = 0

    def scores_for(self, neighbors: Sequence[Neighbor]) -> List[float]:
        missing = [nb for nb in neighbors if nb.id not in self._scores]
        if missing:
            values = self.model.score_many(np.vstack([nb.point for nb in missing]))
            self.calls += len(missing)
            for nb, s in zip(missing, values):
                self._scores[nb.id] = float(s)
        return [self._scores[nb.id] for nb in neighbors]


def momentum(history: Sequence[np.ndarray], m: int, t: int, dim: int = 0) -> np.ndarray:
    """
    Mean step direction.

    t == 0 gives a zero vector of length `dim`, t < m the mean of all t
    steps, otherwise the mean of the last m.
    """
    if len(history) != t:
        raise ConfigError(f"history holds {len(history)} steps, expected t={t}")
    if t == 0:
        return np.zeros(dim)
    window = history if t < m else history[-m:]
    return np.mean(np.vstack(window), axis=0)


def rank_neighbors(x_t, candidates: Sequence[Tuple[np.ndarray, int, float]]) -> List[int]:
    """
    Candidate order for a step: f(x_i) / (1 + |x_i - x_t|) descending, then
    distance ascending, then id ascending. Returns positions into `candidates`.
    """
    x = x_t.values if isinstance(x_t, Instance) else np.asarray(x_t, dtype=float)
    points = np.vstack([c[0] for c in candidates])
    ids = np.array([c[1] for c in candidates])
    scores = np.array([c[2] for c in candidates], dtype=float)
    dist = np.linalg.norm(points - x, axis=1)
    ratio = scores / (1.0 + dist)
    return list(np.lexsort((ids, dist, -ratio)))


def explore_step(x_t, neighbors: Sequence[Tuple[np.ndarray, int, float]], b_t=None) -> Tuple[Instance, int]:
    """
    One greedy step: x_{t+1} = x_t + (x* - x_t + b_t) / 2.

    Args:
        x_t: Current position
        neighbors: (point, id, score) triples
        b_t: Momentum, zeros when None

    Returns:
        (x_{t+1}, id of x*)
    """
    if not neighbors:
        raise ExploreError("explore_step needs at least one neighbor")
    x = x_t.values if isinstance(x_t, Instance) else np.asarray(x_t, dtype=float)
    b = np.zeros_like(x) if b_t is None else np.asarray(b_t, dtype=float)
    best = neighbors[rank_neighbors(x, neighbors)[0]]
    return Instance(x + (np.asarray(best[0]) - x + b) / 2.0), int(best[1])


def _admissible(x_t: np.ndarray, target: np.ndarray, proposal: np.ndarray, config: ExplainerConfig) -> bool:
    if config.use_fast_path and fast_path_ok(x_t, target, proposal, config.epsilon):
        return True
    return max_deviation_ok(x_t, target, proposal, config.epsilon)[0]


def find_counterfactual(
    x0: Instance,
    model: ScoringModel,
    index: SpatialIndex,
    config: ExplainerConfig,
    ledger: PrivacyLedger,
    schema: Optional[FeatureSchema] = None,
    cache: Optional[ScoreCache] = None,
) -> Tuple[Instance, ExploreTrace]:
    """
    Walk from x0 until the model scores the position at or above T_f.

    Args:
        x0: Factual
        model: Scoring model (already reversed for target_class 0)
        index: Session-local index view; selected ids are deactivated in it
        config: Explainer configuration
        ledger: Receives every neighbor id queried
        schema: Carries feature constraints, if any
        cache: Per-session score cache

    Returns:
        (counterfactual x', ExploreTrace)

    Raises:
        ExploreError: Iteration cap reached, index exhausted, or no admissible step
    """
    cache = cache or ScoreCache(model)
    trace = ExploreTrace()
    x_t = x0.values.copy()
    score = model.score(x_t)
    trace.positions.append(x_t)
    trace.scores.append(score)
    history: List[np.ndarray] = []

    def fail(message: str):
        ledger.audit('explore')
        logger.warning(f"Explore failed after {trace.iterations} iterations: {message}")
        return ExploreError(message, {'trace': trace, 'ledger': ledger})

    for t in range(config.max_explore_iters):
        if score >= config.decision_threshold:
            break
        b_t = momentum(history, config.momentum_window, t, dim=x_t.shape[0])

        try:
            neighbors = index.knn(x_t, config.k_neighbors)
        except IndexExhaustedError as e:
            raise fail(str(e)) from e
        ledger.record('explore', [nb.id for nb in neighbors])

        neighbors = [nb for nb in neighbors if nb.id != x0.id]
        if schema is not None:
            neighbors = apply_constraints(neighbors, x0, schema)
        neighbors = [nb for nb in neighbors if nb.distance <= 2.0 * config.epsilon]
        if not neighbors:
            raise fail(f"no feasible neighbor within 2 epsilon of step {t}")

        scores = cache.scores_for(neighbors)
        candidates = [(nb.point, nb.id, s) for nb, s in zip(neighbors, scores)]

        chosen = None
        rejected = 0
        for pos in rank_neighbors(x_t, candidates):
            point, nid, _ = candidates[pos]
            proposal = x_t + (point - x_t + b_t) / 2.0
            if schema is not None:
                proposal = project(proposal, x0, schema)
            if not np.any(proposal != x_t):
                rejected += 1
                continue
            if _admissible(x_t, point, proposal, config):
                chosen = (proposal, nid)
                break
            rejected += 1
        if chosen is None:
            raise fail(f"all {len(candidates)} candidates inadmissible at step {t}")

        proposal, nid = chosen
        history.append(proposal - x_t)
        x_t = proposal
        score = model.score(x_t)
        trace.positions.append(x_t)
        trace.selected_ids.append(nid)
        trace.momenta.append(b_t)
        trace.scores.append(score)
        trace.rejected.append(rejected)
        if config.deactivation == 'selected':
            index.deactivate(nid)
        logger.debug(f"explore t={t}: moved toward id {nid}, score {score:.4f}, rejected {rejected}")
    else:
        if score < config.decision_threshold:
            raise fail(f"max_explore_iters={config.max_explore_iters} reached, score {score:.4f}")

    ledger.audit('explore')
    logger.info(f"Explore found counterfactual in {trace.iterations} iterations (score {score:.4f})")
    return Instance(x_t), trace
