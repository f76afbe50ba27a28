"""
Karp-Sipser leaf removal and k-core peeling

Leaf removal repeatedly deletes a degree-1 vertex together with its
neighbour until no degree-1 vertex remains. Vertices left with degree 0 are
counted as isolated (per side for bipartite graphs); the rest form the
Karp-Sipser core, whose minimum degree is at least 2.
"""

import heapq
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from .core import BaseProcessor, MASK64, VertexOutOfRange
from .graph_core import (
    BipartiteGraph,
    Graph,
    induced_bipartite_subgraph,
    induced_subgraph,
)


AnyGraph = Union[Graph, BipartiteGraph]
OrderPolicy = Union[str, Tuple[str, int]]


@dataclass
class KSResult:
    """
    Outcome of Karp-Sipser leaf removal.

    ``core_vertices`` are the indices (in the input graph) of the core, in
    increasing order; ``core.labels`` carries the same map.
    """
    core: AnyGraph
    core_vertices: Tuple[int, ...]
    i: int
    steps: int
    i1: Optional[int] = None
    i2: Optional[int] = None
    trace: Optional[List[Tuple[int, int]]] = field(default=None, repr=False)

    @property
    def bipartite(self) -> bool:
        return self.i1 is not None

    @property
    def core_size(self) -> int:
        return len(self.core_vertices)

    def summary(self) -> dict:
        return {
            'i': self.i,
            'i1': self.i1,
            'i2': self.i2,
            'steps': self.steps,
            'core_vertices': self.core_size,
            'core_edges': self.core.num_edges,
        }


def _induced(G: AnyGraph, S) -> AnyGraph:
    if isinstance(G, BipartiteGraph):
        return induced_bipartite_subgraph(G, S)
    return induced_subgraph(G, S)


def _priorities(n: int, order_policy: OrderPolicy) -> Optional[np.ndarray]:
    """Rank of each vertex in the leaf worklist; None means vertex index order"""
    if order_policy == 'lowest-index':
        return None
    if isinstance(order_policy, tuple) and len(order_policy) == 2 and order_policy[0] == 'randomized':
        rng = np.random.default_rng(int(order_policy[1]) & MASK64)
        return rng.permutation(n)
    raise ValueError(f"Unknown order policy: {order_policy!r}")


class KarpSipserPeeler(BaseProcessor):
    """
    Runs leaf removal to the Karp-Sipser core.

    Parameters (keyword)
    --------------------
    order_policy : 'lowest-index' or ('randomized', seed)
        Which degree-1 vertex to take next; the isolated count and the core
        vertex set do not depend on it
    keep_trace : bool
        Record the removed (leaf, neighbour) pairs in order
    """

    def process(self, data: AnyGraph) -> KSResult:
        G = data
        order_policy = self.params.get('order_policy', 'lowest-index')
        keep_trace = self.params.get('keep_trace', False)

        n = G.n
        priority = _priorities(n, order_policy)
        degree = [len(a) for a in G.adjacency]
        alive = [True] * n
        trace: Optional[List[Tuple[int, int]]] = [] if keep_trace else None

        def key(v: int) -> int:
            return v if priority is None else int(priority[v])

        # lazy worklist: entries are re-validated when popped
        heap = [(key(v), v) for v in range(n) if degree[v] == 1]
        heapq.heapify(heap)
        steps = 0

        while heap:
            _, leaf = heapq.heappop(heap)
            if not alive[leaf] or degree[leaf] != 1:
                continue
            neighbour = next(w for w in G.adjacency[leaf] if alive[w])

            alive[leaf] = False
            alive[neighbour] = False
            degree[leaf] = 0
            degree[neighbour] = 0
            steps += 1
            if trace is not None:
                trace.append((leaf, neighbour))

            for w in G.adjacency[neighbour]:
                if alive[w]:
                    degree[w] -= 1
                    if degree[w] == 1:
                        heapq.heappush(heap, (key(w), w))

        isolated = [v for v in range(n) if alive[v] and degree[v] == 0]
        core_vertices = tuple(v for v in range(n) if alive[v] and degree[v] > 0)
        core = _induced(G, core_vertices)

        if isinstance(G, BipartiteGraph):
            i1 = sum(1 for v in isolated if v < G.n1)
            i2 = len(isolated) - i1
            result = KSResult(core=core, core_vertices=core_vertices, i=len(isolated),
                              steps=steps, i1=i1, i2=i2, trace=trace)
        else:
            result = KSResult(core=core, core_vertices=core_vertices, i=len(isolated),
                              steps=steps, trace=trace)

        self.logger.debug(
            f"Leaf removal: {steps} steps, {len(isolated)} isolated, core {len(core_vertices)} vertices"
        )
        return result


def karp_sipser(G: AnyGraph, order_policy: OrderPolicy = 'lowest-index', keep_trace: bool = False) -> KSResult:
    """
    Convenience function for Karp-Sipser leaf removal.
    """
    return KarpSipserPeeler(order_policy=order_policy, keep_trace=keep_trace).process(G)


def remove_leaf(G: AnyGraph, leaf: int) -> AnyGraph:
    """
    One leaf-removal step: delete degree-1 vertex ``leaf`` and its neighbour.

    The result is re-indexed; its ``labels`` point back into ``G``.
    """
    if not 0 <= leaf < G.n:
        raise VertexOutOfRange(f"vertex {leaf} outside 0..{G.n - 1}")
    if G.degree(leaf) != 1:
        raise ValueError(f"vertex {leaf} has degree {G.degree(leaf)}, not 1")
    neighbour = G.adjacency[leaf][0]
    return _induced(G, [v for v in range(G.n) if v != leaf and v != neighbour])


def k_core(G: AnyGraph, k: int) -> AnyGraph:
    """
    Maximal induced subgraph with minimum degree at least k (possibly empty).

    Vertices of degree below k are peeled with a stack, each decrement
    re-checked against the threshold.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    degree = [len(a) for a in G.adjacency]
    removed = [False] * G.n
    stack = [v for v in range(G.n) if degree[v] < k]
    for v in stack:
        removed[v] = True

    while stack:
        v = stack.pop()
        for w in G.adjacency[v]:
            if not removed[w]:
                degree[w] -= 1
                if degree[w] < k:
                    removed[w] = True
                    stack.append(w)

    return _induced(G, [v for v in range(G.n) if not removed[v]])
