"""
Graph data structures for the sparse-graph rank toolkit

Immutable simple graphs, bipartite graphs and multigraphs on dense 0-based
vertex indices, plus the structural queries the other modules consume:
- construction with validation
- induced subgraphs with a recorded relabelling
- connected components (largest first)
- the rows x columns bipartite double used for sigma
"""

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _csgraph_components

from .core import LoopRejected, VertexOutOfRange


Edge = Tuple[int, int]


def _build_adjacency(n: int, edges: Iterable[Edge]) -> Tuple[Tuple[int, ...], ...]:
    neighbours: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        neighbours[u].append(v)
        neighbours[v].append(u)
    return tuple(tuple(sorted(nbrs)) for nbrs in neighbours)


def _sorted_membership(sorted_items: Sequence[int], item: int) -> bool:
    idx = bisect_left(sorted_items, item)
    return idx < len(sorted_items) and sorted_items[idx] == item


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph on vertices ``0..n-1``.

    ``labels[v]`` is the original label of vertex ``v`` (identity unless the
    graph was produced by ``induced_subgraph``).
    """
    n: int
    edges: Tuple[Edge, ...]
    adjacency: Tuple[Tuple[int, ...], ...] = field(repr=False)
    labels: Tuple[int, ...] = field(repr=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_vertices(self) -> int:
        return self.n

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return _sorted_membership(self.adjacency[u], v)

    @property
    def old_to_new(self) -> Dict[int, int]:
        """Map from original labels to current vertex indices"""
        return {old: new for new, old in enumerate(self.labels)}

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class BipartiteGraph:
    """
    Simple bipartite graph with parts V1 = ``0..n1-1`` and V2 = ``n1..n1+n2-1``.

    Edges are stored as global index pairs ``(u, w)`` with ``u`` in V1 and
    ``w`` in V2; ``adjacency`` is indexed globally.
    """
    n1: int
    n2: int
    edges: Tuple[Edge, ...]
    adjacency: Tuple[Tuple[int, ...], ...] = field(repr=False)
    labels: Tuple[int, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def num_vertices(self) -> int:
        return self.n1 + self.n2

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def side(self, v: int) -> int:
        """1 for V1, 2 for V2"""
        return 1 if v < self.n1 else 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return _sorted_membership(self.adjacency[u], v)

    def local_edges(self) -> List[Edge]:
        """Edges as ``(row, column)`` pairs of the biadjacency matrix"""
        return [(u, w - self.n1) for u, w in self.edges]

    def as_graph(self) -> Graph:
        """Forget the bipartition (vertex indices unchanged)"""
        return Graph(n=self.n, edges=self.edges, adjacency=self.adjacency, labels=self.labels)

    def __repr__(self):
        return f"BipartiteGraph(n1={self.n1}, n2={self.n2}, m={self.num_edges})"


@dataclass(frozen=True)
class MultiGraph:
    """
    Multigraph allowing loops and parallel edges.

    With ``loops_count_twice`` (the configuration-model convention) a loop
    contributes 2 to the degree of its vertex.
    """
    n: int
    edges: Tuple[Edge, ...]
    loops_count_twice: bool = True

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        loop_weight = 2 if self.loops_count_twice else 1
        for u, v in self.edges:
            if u == v:
                deg[u] += loop_weight
            else:
                deg[u] += 1
                deg[v] += 1
        return deg

    def loop_count(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    def multi_edge_count(self) -> int:
        """Number of surplus copies among parallel non-loop edges"""
        counts = Counter(tuple(sorted(e)) for e in self.edges if e[0] != e[1])
        return sum(c - 1 for c in counts.values() if c > 1)

    def is_simple(self) -> bool:
        return self.loop_count() == 0 and self.multi_edge_count() == 0

    def to_graph(self) -> Graph:
        """Convert a simple multigraph into a Graph"""
        if not self.is_simple():
            raise LoopRejected("multigraph has loops or parallel edges")
        return build_graph(self.n, self.edges)

    def __repr__(self):
        return f"MultiGraph(n={self.n}, m={len(self.edges)})"


# =============================================================================
# Construction
# =============================================================================

def build_graph(n: int, edges: Iterable[Edge], labels: Optional[Sequence[int]] = None) -> Graph:
    """
    Build a simple graph, deduplicating repeated pairs.

    Parameters
    ----------
    n : int
        Vertex count
    edges : iterable of (u, v)
        Vertex pairs with ``0 <= u, v < n``
    labels : sequence of int, optional
        Original labels of the vertices (identity by default)

    Returns
    -------
    Graph

    Raises
    ------
    VertexOutOfRange
        If a pair references a vertex outside ``0..n-1``
    LoopRejected
        If a pair ``(u, u)`` is given
    """
    if n < 0:
        raise VertexOutOfRange(f"vertex count must be non-negative, got {n}")

    edge_set: Set[Edge] = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
        if u == v:
            raise LoopRejected(f"loop at vertex {u}")
        edge_set.add((u, v) if u < v else (v, u))

    sorted_edges = tuple(sorted(edge_set))
    return Graph(
        n=n,
        edges=sorted_edges,
        adjacency=_build_adjacency(n, sorted_edges),
        labels=tuple(labels) if labels is not None else tuple(range(n)),
    )


def build_bipartite_graph(
    n1: int,
    n2: int,
    edges: Iterable[Edge],
    labels: Optional[Sequence[int]] = None,
) -> BipartiteGraph:
    """
    Build a simple bipartite graph from ``(row, column)`` pairs.

    ``row`` indexes V1 (``0..n1-1``) and ``column`` indexes V2 locally
    (``0..n2-1``); the column is stored as global vertex ``n1 + column``.
    """
    if n1 < 0 or n2 < 0:
        raise VertexOutOfRange(f"part sizes must be non-negative, got ({n1}, {n2})")

    edge_set: Set[Edge] = set()
    for u, w in edges:
        u, w = int(u), int(w)
        if not (0 <= u < n1 and 0 <= w < n2):
            raise VertexOutOfRange(f"edge ({u}, {w}) outside {n1}x{n2}")
        edge_set.add((u, n1 + w))

    sorted_edges = tuple(sorted(edge_set))
    n = n1 + n2
    return BipartiteGraph(
        n1=n1,
        n2=n2,
        edges=sorted_edges,
        adjacency=_build_adjacency(n, sorted_edges),
        labels=tuple(labels) if labels is not None else tuple(range(n)),
    )


# =============================================================================
# Structural queries
# =============================================================================

def induced_subgraph(G: Graph, S: Iterable[int]) -> Graph:
    """
    Subgraph of ``G`` induced by ``S``.

    Vertices are renumbered in increasing order of their index in ``G``; the
    result's ``labels`` carry the original labels, so ``old_to_new`` gives
    the relabelling.
    """
    vertices = sorted(set(int(v) for v in S))
    for v in vertices:
        if not 0 <= v < G.n:
            raise VertexOutOfRange(f"vertex {v} outside 0..{G.n - 1}")

    index = {v: i for i, v in enumerate(vertices)}
    sub_edges = [
        (index[u], index[w])
        for u in vertices
        for w in G.adjacency[u]
        if u < w and w in index
    ]
    return build_graph(len(vertices), sub_edges, labels=[G.labels[v] for v in vertices])


def induced_bipartite_subgraph(B: BipartiteGraph, S: Iterable[int]) -> BipartiteGraph:
    """Induced subgraph of a bipartite graph; sides are preserved"""
    vertices = sorted(set(int(v) for v in S))
    for v in vertices:
        if not 0 <= v < B.n:
            raise VertexOutOfRange(f"vertex {v} outside 0..{B.n - 1}")

    left = [v for v in vertices if v < B.n1]
    right = [v for v in vertices if v >= B.n1]
    left_index = {v: i for i, v in enumerate(left)}
    right_index = {v: i for i, v in enumerate(right)}
    sub_edges = [
        (left_index[u], right_index[w])
        for u in left
        for w in B.adjacency[u]
        if w in right_index
    ]
    return build_bipartite_graph(
        len(left),
        len(right),
        sub_edges,
        labels=[B.labels[v] for v in left + right],
    )


def to_sparse(G) -> csr_matrix:
    """Symmetric 0/1 adjacency of a Graph or BipartiteGraph as CSR"""
    n = G.n
    if not G.edges:
        return csr_matrix((n, n), dtype=np.int8)
    arr = np.asarray(G.edges, dtype=np.int64)
    rows = np.concatenate([arr[:, 0], arr[:, 1]])
    cols = np.concatenate([arr[:, 1], arr[:, 0]])
    data = np.ones(rows.size, dtype=np.int8)
    return csr_matrix((data, (rows, cols)), shape=(n, n))


def connected_components(G) -> List[Set[int]]:
    """
    Connected components of ``G``.

    Ordered by decreasing size, ties broken by the smallest vertex they
    contain.
    """
    if G.n == 0:
        return []
    _, labels = _csgraph_components(to_sparse(G), directed=False)

    groups: Dict[int, List[int]] = {}
    for v, label in enumerate(labels.tolist()):
        groups.setdefault(label, []).append(v)

    components = [set(vs) for vs in groups.values()]
    components.sort(key=lambda comp: (-len(comp), min(comp)))
    return components


def bipartite_double(G: Graph) -> BipartiteGraph:
    """
    Rows x columns incidence of A(G): row copy of ``u`` joined to column copy
    of ``v`` for every ordered pair with ``{u, v}`` an edge.
    """
    pairs = [(u, v) for u, v in G.edges] + [(v, u) for u, v in G.edges]
    return build_bipartite_graph(G.n, G.n, pairs)


def degree_histogram(G) -> Dict[int, int]:
    """Number of vertices of each degree"""
    counts = np.bincount(G.degrees()) if G.n else np.zeros(0, dtype=np.int64)
    return {t: int(c) for t, c in enumerate(counts.tolist()) if c}


def to_networkx(G) -> nx.Graph:
    """networkx view of a Graph or BipartiteGraph (bipartite sides in node attribute ``bipartite``)"""
    H = nx.Graph()
    if isinstance(G, BipartiteGraph):
        H.add_nodes_from(range(G.n1), bipartite=0)
        H.add_nodes_from(range(G.n1, G.n), bipartite=1)
    else:
        H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges)
    return H
