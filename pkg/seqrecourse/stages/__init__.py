from .enhance import PathResult, enhance, path_to_recourse, shortest_path
from .exploit import EdgeWeightRule, build_local_graph, edge_weight, evaluate_edges, node_score, node_scores
from .explore import ExploreTrace, ScoreCache, explore_step, find_counterfactual, momentum, rank_neighbors

__all__ = [
    'EdgeWeightRule', 'ExploreTrace', 'PathResult', 'ScoreCache', 'build_local_graph', 'edge_weight',
    'enhance', 'evaluate_edges', 'explore_step', 'find_counterfactual', 'momentum', 'node_score',
    'node_scores', 'path_to_recourse', 'rank_neighbors', 'shortest_path',
]
