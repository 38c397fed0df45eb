import networkx as nx
import numpy as np
import pytest

from seqrecourse.core.types import Instance, LocalGraph, PrivacyLedger
from seqrecourse.exceptions import NoPathError
from seqrecourse.stages.enhance import PathResult, enhance, path_to_recourse, shortest_path


def make_graph(positions, edges, ids=None):
    graph = LocalGraph()
    ids = ids or [None] * len(positions)
    for i, (p, nid) in enumerate(zip(positions, ids)):
        kind = 'factual' if i == 0 else 'counterfactual' if i == len(positions) - 1 else 'data'
        graph.add_vertex(Instance(p, id=nid), kind=kind)
    for i, j, w in edges:
        graph.add_edge(i, j, w)
    return graph


def test_triangle_prefers_cheaper_detour():
    graph = make_graph([[0.0], [1.0], [2.0]], [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)])
    path = shortest_path(graph, 0, 2)
    assert path.vertex_indices == (0, 1, 2)
    assert path.total_weight == 2.0
    assert path.edges == [(0, 1), (1, 2)]


def test_equal_weight_prefers_fewer_hops():
    graph = make_graph([[0.0], [1.0], [2.0]], [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)])
    assert shortest_path(graph, 0, 2).vertex_indices == (0, 2)


def test_equal_weight_and_hops_prefers_smaller_sequence():
    graph = make_graph(
        [[0.0], [1.0], [1.5], [2.0]],
        [(0, 2, 1.0), (2, 3, 1.0), (0, 1, 1.0), (1, 3, 1.0)],
    )
    assert shortest_path(graph, 0, 3).vertex_indices == (0, 1, 3)


def test_unreachable_target():
    graph = make_graph([[0.0], [1.0], [2.0]], [(0, 1, 1.0)])
    with pytest.raises(NoPathError) as info:
        shortest_path(graph, 0, 2)
    assert info.value.stage == 'enhance'


def test_matches_brute_force_on_random_graphs():
    rng = np.random.default_rng(0)
    checked = 0
    for _ in range(500):
        n = int(rng.integers(2, 8))
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.45:
                    edges.append((i, j, float(rng.uniform(0.1, 5.0))))
        graph = make_graph(rng.normal(size=(n, 2)), edges)
        simple = list(nx.all_simple_paths(graph.graph, 0, n - 1))
        if not simple:
            with pytest.raises(NoPathError):
                shortest_path(graph, 0, n - 1)
            continue
        best = min(nx.path_weight(graph.graph, p, weight='weight') for p in simple)
        result = shortest_path(graph, 0, n - 1)
        assert result.total_weight == pytest.approx(best)
        assert nx.path_weight(graph.graph, list(result.vertex_indices), weight='weight') == pytest.approx(best)
        checked += 1
    assert checked > 100


def test_path_to_recourse_reconstructs_counterfactual():
    graph = make_graph([[0.0, 0.0], [1.0, 0.5], [2.0, 2.0]], [(0, 1, 1.0), (1, 2, 1.0)])
    recourse = path_to_recourse(graph, PathResult((0, 1, 2), 2.0))
    assert recourse.k == 2
    np.testing.assert_allclose(recourse.steps, [[1.0, 0.5], [1.0, 1.5]])
    np.testing.assert_allclose(recourse.reconstruct(), [2.0, 2.0], atol=1e-9)


def test_enhance_records_path_ids():
    graph = make_graph(
        [[0.0], [1.0], [1.2], [2.0]],
        [(0, 1, 1.0), (1, 3, 1.0), (0, 2, 5.0), (2, 3, 5.0)],
        ids=[7, 1, 2, 3],
    )
    ledger = PrivacyLedger(10)
    ledger.record('exploit', [1, 2, 3])
    path = enhance(graph, ledger)
    assert path.vertex_indices == (0, 1, 3)
    assert ledger.accessed['enhance'] == {1, 3}
    assert ledger.accessed['enhance'] <= ledger.accessed['exploit']
