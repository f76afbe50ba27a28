#!/usr/bin/env python3
"""
Tests for the random graph samplers.

Usage:
    pytest test_generators.py
"""

import logging
import math
import os
from collections import Counter

import numpy as np
import pytest

from src.analytics import degree_sequence_diagnostic, truncated_poisson_from_mean
from src.core import InfeasibleParameters, OddDegreeSum, RejectionCapExceeded
from src.generators import (
    SamplerConfig,
    sample_bipartite_gnm,
    sample_bipartite_gnp,
    sample_configuration,
    sample_gnm,
    sample_gnp,
    sample_graph,
    sample_min2,
    sample_min2_bipartite,
    sample_with_degree_sequence,
    sampler_config_from_dict,
)
from src.graph_core import BipartiteGraph

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('test_generators')

FULL_SCALE = os.environ.get('KSRANK_FULL_ACCEPTANCE') == '1'


def _opposite_of_zero(G):
    """In a 4-cycle on {0, 1, 2, 3}, the vertex not adjacent to 0"""
    return ({1, 2, 3} - set(G.adjacency[0])).pop()


# =============================================================================
# G(n, p) and G(n, m)
# =============================================================================

def test_gnp_extremes():
    assert sample_gnp(10, 0.0, seed=1).num_edges == 0
    assert sample_gnp(6, 1.0, seed=1).num_edges == 15
    complete = sample_gnp(50, 1.0, seed=3)
    assert complete.num_edges == 50 * 49 // 2
    assert all(complete.degree(v) == 49 for v in range(50))
    assert sample_gnp(0, 0.5, seed=1).n == 0
    assert sample_gnp(1, 0.5, seed=1).num_edges == 0


def test_gnp_is_deterministic_in_seed():
    a = sample_gnp(200, 0.05, seed=11)
    b = sample_gnp(200, 0.05, seed=11)
    c = sample_gnp(200, 0.05, seed=12)
    assert a.edges == b.edges
    assert a.edges != c.edges


def test_gnp_edge_count_concentrates():
    n, p = 10_000, 3e-4
    pairs = n * (n - 1) / 2
    mean = pairs * p
    sd = math.sqrt(pairs * p * (1 - p))
    counts = [sample_gnp(n, p, seed=s).num_edges for s in range(100)]
    assert abs(np.mean(counts) - mean) < 4 * sd / math.sqrt(len(counts))
    assert all(abs(k - mean) < 6 * sd for k in counts)


def test_gnp_rejects_bad_probability():
    with pytest.raises(InfeasibleParameters):
        sample_gnp(5, 1.5)


def test_bipartite_gnp():
    full = sample_bipartite_gnp(2, 2, 1.0, seed=0)
    assert full.num_edges == 4
    assert sample_bipartite_gnp(3, 4, 0.0, seed=0).num_edges == 0
    B = sample_bipartite_gnp(30, 40, 0.2, seed=5)
    assert all(u < 30 <= w for u, w in B.edges)


def test_gnm_exact_edge_count():
    G = sample_gnm(30, 100, seed=2)
    assert G.num_edges == 100
    assert sample_gnm(8, 28, seed=0).num_edges == 28
    with pytest.raises(InfeasibleParameters):
        sample_gnm(5, 11)
    B = sample_bipartite_gnm(5, 7, 20, seed=4)
    assert B.num_edges == 20
    with pytest.raises(InfeasibleParameters):
        sample_bipartite_gnm(2, 2, 5)


# =============================================================================
# Minimum-degree-2 models
# =============================================================================

def test_min2_triangle():
    for method in ('configuration', 'pairs'):
        G = sample_min2(3, 3, seed=0, method=method)
        assert G.edges == ((0, 1), (0, 2), (1, 2))


def test_min2_infeasible():
    with pytest.raises(InfeasibleParameters):
        sample_min2(5, 4)
    with pytest.raises(InfeasibleParameters):
        sample_min2(4, 7)


def test_min2_uniform_on_four_cycles():
    # K(4, 4, 2) is the three labelled 4-cycles
    samples = 30_000
    counts = Counter(_opposite_of_zero(sample_min2(4, 4, seed=s)) for s in range(samples))
    for v in (1, 2, 3):
        assert abs(counts[v] / samples - 1 / 3) < 0.02


def test_min2_pairs_route_uniform_on_four_cycles():
    samples = 3_000
    counts = Counter(_opposite_of_zero(sample_min2(4, 4, seed=s, method='pairs')) for s in range(samples))
    for v in (1, 2, 3):
        assert abs(counts[v] / samples - 1 / 3) < 0.05


@pytest.mark.parametrize("seed", range(5))
def test_min2_invariants(seed):
    G = sample_min2(200, 300, seed=seed)
    assert G.n == 200
    assert G.num_edges == 300
    assert G.degrees().min() >= 2


def test_min2_rejection_cap():
    with pytest.raises(RejectionCapExceeded):
        sample_min2(2000, 3000, seed=0, rejection_cap=1)


def test_min2_bipartite():
    B = sample_min2_bipartite(2, 2, 4, seed=0)
    assert B.num_edges == 4

    ring = sample_min2_bipartite(3, 3, 6, seed=1)
    assert ring.num_edges == 6
    assert all(ring.degree(v) == 2 for v in range(6))

    with pytest.raises(InfeasibleParameters):
        sample_min2_bipartite(3, 2, 3)

    B = sample_min2_bipartite(60, 50, 150, seed=9)
    assert (B.n1, B.n2, B.num_edges) == (60, 50, 150)
    assert B.degrees().min() >= 2


def test_min2_degree_law():
    n = 100_000 if FULL_SCALE else 20_000
    m = 3 * n // 2
    tolerance = 5e-3 if FULL_SCALE else 4 * math.sqrt(0.25 / n)
    lam = truncated_poisson_from_mean(2 * m / n).lam
    G = sample_min2(n, m, seed=2024)
    frame = degree_sequence_diagnostic(G.degrees(), lam, t_max=8)
    logger.info(f"max |empirical - rho| = {frame['abs_diff'].max():.5f}")
    assert (frame['abs_diff'] < tolerance).all()


# =============================================================================
# Configuration model and degree sequences
# =============================================================================

def test_configuration_model():
    single = sample_configuration([1, 1], seed=0)
    assert single.edges == ((0, 1),) or single.edges == ((1, 0),)

    loops = sample_configuration([4], seed=0)
    assert loops.loop_count() == 2
    assert list(loops.degrees()) == [4]

    M = sample_configuration([3, 2, 2, 1, 4], seed=7)
    assert list(M.degrees()) == [3, 2, 2, 1, 4]

    with pytest.raises(OddDegreeSum):
        sample_configuration([1, 2])


def test_degree_sequence_sampler():
    triangle = sample_with_degree_sequence([2, 2, 2], seed=0)
    assert triangle.edges == ((0, 1), (0, 2), (1, 2))

    square = sample_with_degree_sequence([2, 2, 2, 2], seed=3)
    assert square.num_edges == 4
    assert all(square.degree(v) == 2 for v in range(4))

    with pytest.raises(OddDegreeSum):
        sample_with_degree_sequence([3, 1, 1])
    with pytest.raises(InfeasibleParameters):
        sample_with_degree_sequence([3, 3, 1, 1])


def test_degree_sequence_uniform_on_perfect_matchings():
    samples = 30_000
    counts = Counter(sample_with_degree_sequence([1, 1, 1, 1], seed=s).adjacency[0][0] for s in range(samples))
    for v in (1, 2, 3):
        assert abs(counts[v] / samples - 1 / 3) < 0.02


def test_bipartite_degree_split():
    B = sample_with_degree_sequence(None, seed=0, bipartite_split=([2, 2], [2, 2]))
    assert isinstance(B, BipartiteGraph)
    assert B.num_edges == 4
    with pytest.raises(InfeasibleParameters):
        sample_with_degree_sequence(None, bipartite_split=([2, 1], [2, 2]))


# =============================================================================
# Configuration objects
# =============================================================================

def test_sampler_config_validation():
    with pytest.raises(InfeasibleParameters):
        SamplerConfig(model='nope')
    with pytest.raises(InfeasibleParameters):
        SamplerConfig(model='gnp', n=5, p=-0.1)
    assert SamplerConfig(model='gnnp').bipartite
    assert not SamplerConfig(model='min2').bipartite


def test_sampler_config_from_dict():
    config = sampler_config_from_dict({'model': 'gnp', 'n': 1000, 'c': 4.0}, seed=3)
    assert config.p == pytest.approx(0.004)
    bip = sampler_config_from_dict({'model': 'gnnp', 'n': 500, 'c': 2.0}, seed=3)
    assert (bip.n1, bip.n2) == (500, 500)
    assert bip.p == pytest.approx(0.004)


def test_sample_graph_dispatch():
    G = sample_graph(SamplerConfig(model='gnm', n=20, m=15, seed=1))
    assert G.num_edges == 15
    B = sample_graph(SamplerConfig(model='gnnp', n1=4, n2=5, p=1.0, seed=1))
    assert isinstance(B, BipartiteGraph) and B.num_edges == 20
    D = sample_graph(SamplerConfig(model='degseq', degrees=[1, 1, 2], seed=1))
    assert D.edges == ((0, 2), (1, 2))
