#!/usr/bin/env python3
"""
Tests for the graph data structures and structural queries.

Usage:
    pytest test_graph_core.py
"""

import logging

import pytest

from src.core import LoopRejected, VertexOutOfRange
from src.graph_core import (
    MultiGraph,
    bipartite_double,
    build_bipartite_graph,
    build_graph,
    connected_components,
    degree_histogram,
    induced_bipartite_subgraph,
    induced_subgraph,
    to_networkx,
    to_sparse,
)

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('test_graph_core')


def test_build_graph_deduplicates_and_sorts():
    G = build_graph(4, [(1, 0), (0, 1), (3, 2), (2, 1)])
    assert G.edges == ((0, 1), (1, 2), (2, 3))
    assert G.num_edges == 3
    assert G.adjacency[1] == (0, 2)
    assert G.has_edge(2, 1) and not G.has_edge(0, 3)
    assert list(G.degrees()) == [1, 2, 2, 1]


def test_degree_sum_is_twice_edge_count():
    G = build_graph(6, [(0, 1), (0, 2), (0, 3), (4, 5), (1, 2)])
    assert int(G.degrees().sum()) == 2 * G.num_edges


def test_build_graph_rejects_loops_and_out_of_range():
    with pytest.raises(LoopRejected):
        build_graph(3, [(1, 1)])
    with pytest.raises(VertexOutOfRange):
        build_graph(3, [(0, 3)])
    with pytest.raises(VertexOutOfRange):
        build_graph(-1, [])


def test_empty_graph():
    G = build_graph(0, [])
    assert G.n == 0 and G.num_edges == 0
    assert connected_components(G) == []


def test_bipartite_graph_uses_global_indices():
    B = build_bipartite_graph(2, 3, [(0, 0), (1, 2), (0, 0)])
    assert B.n == 5
    assert B.edges == ((0, 2), (1, 4))
    assert B.local_edges() == [(0, 0), (1, 2)]
    assert B.side(1) == 1 and B.side(2) == 2
    with pytest.raises(VertexOutOfRange):
        build_bipartite_graph(2, 2, [(0, 2)])


def test_induced_subgraph_relabels_in_order():
    G = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    H = induced_subgraph(G, [4, 1, 2])
    assert H.n == 3
    assert H.labels == (1, 2, 4)
    assert H.edges == ((0, 1),)
    assert H.old_to_new == {1: 0, 2: 1, 4: 2}


def test_induced_subgraph_composes_labels():
    G = build_graph(6, [(0, 1), (2, 3), (4, 5), (1, 5)])
    H = induced_subgraph(G, [1, 3, 5])
    K = induced_subgraph(H, [0, 2])
    assert K.labels == (1, 5)
    assert K.edges == ((0, 1),)


def test_induced_bipartite_subgraph_preserves_sides():
    B = build_bipartite_graph(3, 2, [(0, 0), (1, 0), (2, 1)])
    H = induced_bipartite_subgraph(B, [1, 2, 3])
    assert (H.n1, H.n2) == (2, 1)
    assert H.labels == (1, 2, 3)
    assert H.local_edges() == [(0, 0)]


def test_connected_components_largest_first():
    G = build_graph(7, [(5, 6), (0, 1), (1, 2), (3, 4)])
    comps = connected_components(G)
    assert comps == [{0, 1, 2}, {3, 4}, {5, 6}]
    assert sum(len(c) for c in comps) == G.n


def test_bipartite_double_edges_and_symmetry():
    G = build_graph(3, [(0, 1), (1, 2)])
    D = bipartite_double(G)
    assert (D.n1, D.n2) == (3, 3)
    assert D.num_edges == 2 * G.num_edges
    assert sorted(D.local_edges()) == [(0, 1), (1, 0), (1, 2), (2, 1)]


def test_sparse_adjacency_is_symmetric():
    G = build_graph(4, [(0, 1), (1, 3)])
    A = to_sparse(G).toarray()
    assert (A == A.T).all()
    assert A.sum() == 2 * G.num_edges


def test_multigraph_loops_count_twice():
    M = MultiGraph(n=3, edges=((0, 0), (0, 1), (0, 1), (1, 2)))
    assert list(M.degrees()) == [4, 3, 1]
    assert M.loop_count() == 1
    assert M.multi_edge_count() == 1
    assert not M.is_simple()
    with pytest.raises(LoopRejected):
        M.to_graph()
    simple = MultiGraph(n=3, edges=((0, 1), (1, 2)))
    assert simple.to_graph().edges == ((0, 1), (1, 2))


def test_degree_histogram_and_networkx_view():
    G = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    assert degree_histogram(G) == {1: 3, 3: 1}
    H = to_networkx(G)
    assert H.number_of_nodes() == 4 and H.number_of_edges() == 3

    B = build_bipartite_graph(1, 2, [(0, 0), (0, 1)])
    HB = to_networkx(B)
    assert HB.nodes[0]['bipartite'] == 0 and HB.nodes[2]['bipartite'] == 1
