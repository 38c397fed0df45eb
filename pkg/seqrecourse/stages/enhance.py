"""
Enhance: cheapest path from the factual vertex to the counterfactual vertex,
turned into recourse steps.
"""
import heapq
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.types import LocalGraph, PrivacyLedger, RecourseMatrix
from ..exceptions import NoPathError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PathResult:
    vertex_indices: Tuple[int, ...]
    total_weight: float

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return list(zip(self.vertex_indices[:-1], self.vertex_indices[1:]))

    def __len__(self) -> int:
        return len(self.vertex_indices)


def shortest_path(graph: LocalGraph, source: int, target: int) -> PathResult:
    """
    Dijkstra with labels (weight, hops, vertex sequence).

    Among equal-weight paths the one with fewer edges wins, then the
    lexicographically smallest vertex sequence.

    Raises:
        NoPathError: target unreachable from source
    """
    n = graph.number_of_vertices
    for v in (source, target):
        if not 0 <= v < n:
            raise IndexError(f"vertex {v} not in graph of {n} vertices")
    adjacency = graph.graph.adj
    best: Dict[int, Tuple[float, int, Tuple[int, ...]]] = {source: (0.0, 0, (source,))}
    heap = [(0.0, 0, (source,))]
    settled = set()
    while heap:
        label = heapq.heappop(heap)
        weight, hops, path = label
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == target:
            return PathResult(path, weight)
        for nxt, data in adjacency[node].items():
            if nxt in settled:
                continue
            candidate = (weight + data['weight'], hops + 1, path + (nxt,))
            known = best.get(nxt)
            if known is None or candidate < known:
                best[nxt] = candidate
                heapq.heappush(heap, candidate)
    raise NoPathError(f"vertex {target} unreachable from vertex {source}", 'enhance', {'graph': graph})


def path_to_recourse(graph: LocalGraph, path: PathResult) -> RecourseMatrix:
    """z_i = v_i - v_{i-1} along the path."""
    if not path.vertex_indices:
        raise NoPathError("empty path", 'enhance', {'graph': graph})
    positions = np.vstack([graph.vertices[i].values for i in path.vertex_indices])
    return RecourseMatrix(graph.vertices[path.vertex_indices[0]], np.diff(positions, axis=0))


def enhance(graph: LocalGraph, ledger: Optional[PrivacyLedger] = None) -> PathResult:
    """Shortest path from vertex 0 to the last vertex; path vertex ids go to the ledger."""
    path = shortest_path(graph, 0, graph.number_of_vertices - 1)
    if ledger is not None:
        ledger.record('enhance', [
            graph.vertices[i].id for i in path.vertex_indices if graph.kind(i) != 'factual'
        ])
        ledger.audit('enhance')
    logger.info(f"Enhance: {len(path) - 1} steps, total weight {path.total_weight:.6g}")
    return path
