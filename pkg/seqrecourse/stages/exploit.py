"""
Exploit: grow a small local graph of training points between the factual
and the counterfactual.

From the newest vertex v_t the next vertex is the neighbor maximizing

    (1 + cos(candidate - v_t, x' - v_t)) / 2 * D(v_t, candidate)

where D is the mean density along the connecting line. Every new vertex is
tried against all earlier vertices under the edge weight rule; a missing
edge means the rule gave zero weight.

The stage ends once some vertex has come within epsilon of x' and a vertex
in the factual's component has an edge to x'. Next to x', candidates with
such an edge are taken first.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..core.config import ExplainerConfig
from ..core.constraints import apply_constraints
from ..core.types import FeatureSchema, Instance, LocalGraph, PrivacyLedger
from ..density.kde import line_profile
from ..exceptions import ExploitError, GeometryError, IndexExhaustedError, NoPathError
from ..models.base import ScoringModel
from ..spatial.index import SpatialIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgeWeightRule:
    """
    strict:  |v_i - v_j|        if every line sample density > T_p
    average: D_ij * |v_i - v_j| if D_ij > T_p  (|v_i - v_j| / D_ij when inverse)
    """
    mode: str
    threshold: float
    q: int
    endpoint_inclusive: bool = False
    inverse_density: bool = False

    @classmethod
    def from_config(cls, config: ExplainerConfig, threshold: float) -> 'EdgeWeightRule':
        return cls(
            mode=config.weight_mode,
            threshold=float(threshold),
            q=config.line_samples,
            endpoint_inclusive=config.endpoint_inclusive,
            inverse_density=config.inverse_density_weight,
        )


def _vector(x) -> np.ndarray:
    return x.values if isinstance(x, Instance) else np.asarray(x, dtype=float).reshape(-1)


def node_scores(candidates, v_t, x_prime, density, q: int, endpoint_inclusive: bool = False) -> np.ndarray:
    """Alignment-times-density score for each row of `candidates`."""
    C = np.atleast_2d(np.asarray(candidates, dtype=float))
    v = _vector(v_t)
    goal = _vector(x_prime) - v
    offsets = C - v
    norms = np.linalg.norm(offsets, axis=1)
    goal_norm = np.linalg.norm(goal)
    if goal_norm == 0.0 or np.any(norms == 0.0):
        raise GeometryError("node score needs candidate != v_t and v_t != x'")
    cos = np.clip(offsets @ goal / (norms * goal_norm), -1.0, 1.0)
    avg = line_profile(density, v, C, q, endpoint_inclusive).mean(axis=1)
    return (1.0 + cos) / 2.0 * avg


def node_score(candidate, v_t, x_prime, density, q: int, endpoint_inclusive: bool = False) -> float:
    return float(node_scores(_vector(candidate), v_t, x_prime, density, q, endpoint_inclusive)[0])


def evaluate_edges(lower, upper, rule: EdgeWeightRule, density) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Apply the weight rule to the lines lower[j] -> upper[j] (either may broadcast).

    Returns:
        (weights with NaN where no edge, mean densities, min densities)
    """
    A, B = np.broadcast_arrays(np.atleast_2d(np.asarray(lower, dtype=float)),
                               np.atleast_2d(np.asarray(upper, dtype=float)))
    profile = line_profile(density, A, B, rule.q, rule.endpoint_inclusive)
    avg = profile.mean(axis=1)
    low = profile.min(axis=1)
    length = np.linalg.norm(B - A, axis=1)
    if rule.mode == 'strict':
        passes = low > rule.threshold
        weights = length.copy()
    else:
        passes = avg > rule.threshold
        with np.errstate(divide='ignore', invalid='ignore'):
            weights = length / avg if rule.inverse_density else avg * length
    passes &= length > 0.0
    passes &= weights > 0.0
    return np.where(passes, weights, np.nan), avg, low


def edge_weight(v_i, v_j, rule: EdgeWeightRule, density) -> Optional[float]:
    """Weight of the edge v_i -- v_j, or None when the rule gives zero."""
    weights, _, _ = evaluate_edges(_vector(v_i), _vector(v_j), rule, density)
    w = weights[0]
    return None if np.isnan(w) else float(w)




def _connect(graph: LocalGraph, new: int, vertices: np.ndarray, rule: EdgeWeightRule, density) -> int:
    """Edges from every earlier vertex (as V_i) to vertex `new`; returns edges added."""
    if new == 0:
        return 0
    weights, avg, low = evaluate_edges(vertices[:new], vertices[new], rule, density)
    added = 0
    for i in np.flatnonzero(~np.isnan(weights)):
        graph.add_edge(int(i), new, float(weights[i]), density_avg=float(avg[i]), density_min=float(low[i]))
        added += 1
    return added


class TerminalEdges:
    """Edges each vertex would get to x'; every vertex is evaluated once."""

    def __init__(self, goal: np.ndarray, rule: EdgeWeightRule, density):
        self.goal = goal
        self.rule = rule
        self.density = density
        self.edges: Dict[int, Tuple[float, float, float]] = {}

    def add(self, vertex: int, point: np.ndarray) -> bool:
        weights, avg, low = evaluate_edges(point, self.goal, self.rule, self.density)
        if np.isnan(weights[0]):
            return False
        self.edges[vertex] = (float(weights[0]), float(avg[0]), float(low[0]))
        return True

    def passes(self, points: np.ndarray) -> np.ndarray:
        weights, _, _ = evaluate_edges(points, self.goal, self.rule, self.density)
        return ~np.isnan(weights)

    def reachable(self, graph: LocalGraph) -> bool:
        """True once a vertex with an edge to x' sits in the factual's component."""
        if not self.edges:
            return False
        component = nx.node_connected_component(graph.graph, 0)
        return any(v in component for v in self.edges)


def build_local_graph(
    x: Instance,
    x_prime: Instance,
    index: SpatialIndex,
    density,
    model: Optional[ScoringModel],
    config: ExplainerConfig,
    ledger: PrivacyLedger,
    threshold: float,
    schema: Optional[FeatureSchema] = None,
    synthetic: Sequence[np.ndarray] = (),
) -> LocalGraph:
    """
    Args:
        x: Factual, becomes vertex 0
        x_prime: Counterfactual, becomes the last vertex
        index: Session-local index view; selected ids are deactivated in it
        density: Density model for node scores and edge rules
        model: Scores new vertices in debug logs
        config: Explainer configuration
        ledger: Receives every queried neighbor id
        threshold: Resolved absolute T_p
        schema: Feature constraints, if any
        synthetic: Extra off-data candidate positions (used when
            config.allow_synthetic_vertices)

    Returns:
        LocalGraph with a path from vertex 0 to the last vertex

    Raises:
        ExploitError: Neighborhood empty with nothing to fall back on
        NoPathError: x' still unconnected after exploit_patience iterations
            within epsilon of it, or after max_exploit_iters
    """
    start = _vector(x)
    goal = _vector(x_prime)
    if np.array_equal(start, goal):
        raise ExploitError("factual and counterfactual coincide")
    rule = EdgeWeightRule.from_config(config, threshold)
    eps = config.epsilon

    graph = LocalGraph()
    graph.add_vertex(x, kind='factual')
    vertices = start[None, :].copy()
    terminal = TerminalEdges(goal, rule, density)
    terminal.add(0, start)
    # first iteration at which some vertex lies within epsilon of x'
    arrived_at = 0 if np.linalg.norm(goal - start) <= eps else None
    pool = [np.asarray(p, dtype=float) for p in synthetic] if config.allow_synthetic_vertices else []
    pool = [p for p in pool if not np.array_equal(p, start) and not np.array_equal(p, goal)]
    used_synthetic = np.zeros(len(pool), dtype=bool)
    cur = 0

    def partial():
        return {'graph': graph, 'ledger': ledger, 'threshold': threshold}

    def finish(it: int) -> LocalGraph:
        ledger.record('exploit', [x_prime.id])
        last = graph.add_vertex(Instance(goal, id=x_prime.id), kind='counterfactual')
        for i, (w, avg, low) in sorted(terminal.edges.items()):
            graph.add_edge(i, last, w, density_avg=avg, density_min=low)
        ledger.audit('exploit')
        logger.info(f"Exploit connected counterfactual after {it} iterations: {graph}")
        return graph

    for it in range(config.max_exploit_iters):
        if arrived_at is not None:
            if terminal.reachable(graph):
                return finish(it)
            if it - arrived_at >= config.exploit_patience:
                ledger.audit('exploit')
                raise NoPathError(
                    f"counterfactual within epsilon since iteration {arrived_at} but unconnected "
                    f"after {config.exploit_patience} more at T_p={threshold:.4g}",
                    'exploit',
                    partial(),
                )
        v_t = vertices[cur]

        neighbors = index.radius_query(v_t, eps)[:config.k_neighbors]
        if not neighbors:
            try:
                neighbors = index.knn(v_t, config.k_neighbors)
            except IndexExhaustedError:
                neighbors = []
        ledger.record('exploit', [nb.id for nb in neighbors])
        if schema is not None:
            neighbors = apply_constraints(neighbors, x, schema)

        points: List[np.ndarray] = []
        ids: List[Optional[int]] = []
        for nb in neighbors:
            if np.array_equal(nb.point, v_t) or np.array_equal(nb.point, goal):
                continue
            points.append(nb.point)
            ids.append(nb.id)
        for j, p in enumerate(pool):
            if not used_synthetic[j] and 0.0 < np.linalg.norm(p - v_t) <= eps:
                points.append(p)
                ids.append(-1 - j)

        if not points:
            ledger.audit('exploit')
            raise ExploitError(f"empty neighborhood around vertex {cur}", partial())

        P = np.vstack(points)
        scores = node_scores(P, v_t, goal, density, rule.q, rule.endpoint_inclusive)
        dist = np.linalg.norm(P - v_t, axis=1)
        order_ids = np.array([i if i >= 0 else index.n - i for i in ids])
        # scores equal to 12 decimals tie and fall through to distance
        keys = [order_ids, dist, -np.round(scores, 12)]
        if np.linalg.norm(goal - v_t) <= eps:
            # next to x': candidates that already link to it come first
            keys.append(~terminal.passes(P))
        best = int(np.lexsort(keys)[0])

        chosen = ids[best]
        if chosen >= 0:
            index.deactivate(chosen)
            cur = graph.add_vertex(Instance(P[best], id=chosen), kind='data')
        else:
            used_synthetic[-1 - chosen] = True
            cur = graph.add_vertex(Instance(P[best]), kind='synthetic')
        vertices = np.vstack([vertices, P[best]])
        added = _connect(graph, cur, vertices, rule, density)
        linked = terminal.add(cur, P[best])
        if arrived_at is None and np.linalg.norm(goal - P[best]) <= eps:
            arrived_at = it + 1
        if model is not None and logger.isEnabledFor(logging.DEBUG):
            logger.debug(
                f"exploit it={it}: vertex {cur} (id {chosen}) node score {scores[best]:.4g}, "
                f"f={model.score(P[best]):.4f}, {added} edges, links to x': {linked}"
            )

    if arrived_at is not None and terminal.reachable(graph):
        return finish(config.max_exploit_iters)
    ledger.audit('exploit')
    raise NoPathError(
        f"counterfactual not reached within max_exploit_iters={config.max_exploit_iters} "
        f"at T_p={threshold:.4g}",
        'exploit',
        partial(),
    )
