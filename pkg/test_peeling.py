#!/usr/bin/env python3
"""
Tests for Karp-Sipser leaf removal and k-core peeling.

Usage:
    pytest test_peeling.py
"""

import logging

import pytest

from src.generators import sample_bipartite_gnp, sample_gnp
from src.graph_core import build_bipartite_graph, build_graph
from src.linalg import adjacency_matrix, biadjacency_matrix, rank_exact, sigma
from src.peeling import karp_sipser, k_core, remove_leaf

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('test_peeling')


def _check_counts(G, result):
    assert G.n == result.core_size + result.i + 2 * result.steps
    if result.core_size:
        assert result.core.degrees().min() >= 2


def test_single_edge():
    result = karp_sipser(build_graph(2, [(0, 1)]))
    assert (result.i, result.steps, result.core_size) == (0, 1, 0)


def test_star():
    result = karp_sipser(build_graph(4, [(0, 1), (0, 2), (0, 3)]), keep_trace=True)
    assert result.i == 2
    assert result.steps == 1
    assert result.core_size == 0
    assert result.trace == [(1, 0)]


def test_cycle_is_its_own_core():
    G = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    result = karp_sipser(G)
    assert result.i == 0 and result.steps == 0
    assert result.core_vertices == (0, 1, 2, 3)
    assert result.core.edges == G.edges


def test_isolated_vertices_count():
    G = build_graph(5, [(1, 2)])
    result = karp_sipser(G)
    assert result.i == 3
    assert result.steps == 1


def test_pendant_path_on_cycle():
    # triangle 0-1-2 with path 2-3-4
    G = build_graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
    result = karp_sipser(G)
    _check_counts(G, result)
    assert result.core_vertices == (0, 1, 2)
    assert result.core.labels == (0, 1, 2)


def test_bipartite_path_counts_per_side():
    # a - b - c - d with a, c in V1 and b, d in V2
    B = build_bipartite_graph(2, 2, [(0, 0), (1, 0), (1, 1)])
    result = karp_sipser(B)
    assert result.bipartite
    assert (result.i1, result.i2, result.steps) == (0, 0, 2)


def test_bipartite_star_isolates_on_one_side():
    B = build_bipartite_graph(1, 3, [(0, 0), (0, 1), (0, 2)])
    result = karp_sipser(B)
    assert (result.i1, result.i2) == (0, 2)
    assert result.steps == 1


@pytest.mark.parametrize("seed", range(10))
def test_bipartite_side_counts(seed):
    B = sample_bipartite_gnp(40, 35, 2.5 / 40, seed=seed)
    result = karp_sipser(B)
    core1 = sum(1 for v in result.core_vertices if v < B.n1)
    core2 = result.core_size - core1
    assert B.n1 == core1 + result.i1 + result.steps
    assert B.n2 == core2 + result.i2 + result.steps


def test_order_policy_does_not_change_outcome():
    for seed in range(500):
        G = sample_gnp(30, 0.1, seed=seed)
        reference = karp_sipser(G)
        _check_counts(G, reference)
        for policy_seed in range(5):
            other = karp_sipser(G, order_policy=('randomized', seed * 10 + policy_seed))
            assert other.i == reference.i
            assert other.core_vertices == reference.core_vertices
            assert other.steps == reference.steps


def test_unknown_order_policy():
    with pytest.raises(ValueError):
        karp_sipser(build_graph(2, [(0, 1)]), order_policy='highest')


def test_remove_leaf():
    G = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    H = remove_leaf(G, 0)
    assert H.n == 2
    assert H.labels == (2, 3)
    assert H.edges == ((0, 1),)
    with pytest.raises(ValueError):
        remove_leaf(G, 1)


def test_k_core():
    # triangle with a pendant and a separate edge
    G = build_graph(6, [(0, 1), (1, 2), (0, 2), (2, 3), (4, 5)])
    core = k_core(G, 2)
    assert core.labels == (0, 1, 2)
    assert k_core(core, 2).edges == core.edges
    assert k_core(G, 3).n == 0
    assert k_core(G, 0).n == 6


def test_k_core_cascades():
    # path: every vertex eventually drops below 2
    G = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert k_core(G, 2).n == 0


# =============================================================================
# Rank under leaf removal
# =============================================================================

def _first_leaf(G):
    return next((v for v in range(G.n) if G.degree(v) == 1), None)


def test_leaf_removal_rank_decrement():
    checked = 0
    for seed in range(300):
        G = sample_gnp(12, 0.18, seed=seed)
        leaf = _first_leaf(G)
        if leaf is None:
            continue
        H = remove_leaf(G, leaf)
        assert rank_exact(adjacency_matrix(H)) == rank_exact(adjacency_matrix(G)) - 2
        assert sigma(H) == sigma(G) - 2
        checked += 1
    assert checked >= 100


def test_bipartite_leaf_removal_rank_decrement():
    checked = 0
    for seed in range(300):
        B = sample_bipartite_gnp(7, 6, 0.25, seed=seed)
        leaf = _first_leaf(B)
        if leaf is None:
            continue
        H = remove_leaf(B, leaf)
        assert rank_exact(biadjacency_matrix(H)) == rank_exact(biadjacency_matrix(B)) - 1
        checked += 1
    assert checked >= 100


def test_leaf_removal_away_from_lowest_index():
    # path 0-1-2-3 plus triangle 3-4-5; remove the far end of the path
    G = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (3, 5)])
    H = remove_leaf(G, 0)
    assert rank_exact(adjacency_matrix(G)) - rank_exact(adjacency_matrix(H)) == 2
    assert sigma(G) - sigma(H) == 2
