import json

import pytest

from haargpd.graphspace import (DanglingEdge, Disconnected, EmptyGraph, GraphError, MultiGraph, pi1_rank,
                                spanning_tree, validate_graph)

from conftest import C3, D2, R1, R2, TREE4, random_graphs


def kruskal_by_id(g):
    """Oracle: Kruskal with edge id as weight (the lowest-id-first tree is the unique MST)."""
    parent = list(range(g.vertices))

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    chosen = set()
    for e in g.edges:
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[a] = b
            chosen.add(e.id)
    return chosen


def test_validate_ok():
    validate_graph(C3)


def test_validate_disconnected():
    with pytest.raises(Disconnected):
        validate_graph(MultiGraph(2, ()))


def test_validate_dangling():
    with pytest.raises(DanglingEdge):
        validate_graph(MultiGraph.from_pairs(2, [(0, 5)]))


def test_validate_empty():
    with pytest.raises(EmptyGraph):
        validate_graph(MultiGraph(0, ()))


def test_validate_non_dense_ids():
    with pytest.raises(GraphError):
        validate_graph(MultiGraph(2, ((1, 0, 1),)))


def test_spanning_tree_examples():
    assert spanning_tree(C3, 0).tree_edges == {0, 1}
    assert spanning_tree(R1, 0).tree_edges == frozenset()
    assert spanning_tree(D2, 0).tree_edges == {0}


@pytest.mark.parametrize("g", [C3, D2, R2, TREE4] + random_graphs(6, seed=7))
def test_spanning_tree_matches_kruskal_oracle(g):
    tree = spanning_tree(g, 0)
    assert set(tree.tree_edges) == kruskal_by_id(g)
    assert len(tree.tree_edges) == g.vertices - 1
    assert set(tree.order) == set(range(g.vertices))
    assert spanning_tree(g, 0) == tree


def test_pi1_rank():
    assert pi1_rank(R2) == 2
    assert pi1_rank(C3) == 1
    assert pi1_rank(TREE4) == 0


@pytest.mark.parametrize("g", [C3, D2, R2] + random_graphs(4, seed=3))
def test_non_tree_edges_count_rank(g):
    assert len(spanning_tree(g, 0).non_tree_edges(g)) == pi1_rank(g)


def test_json_round_trip(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(C3.to_json()))
    assert MultiGraph.load(path) == C3
