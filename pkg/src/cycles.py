"""
Special cycles and isolated-cycle census

A special cycle is an induced cycle whose length is divisible by 4 and in
which every second vertex has degree 2 in the host graph. The degree-2
vertices are called connectors here and the others hubs. A cycle made only of
degree-2 vertices is a whole component (isolated) and is counted twice in s.

In a bipartite graph a cycle is 1-special when its V1 vertices are the
connectors and 2-special when its V2 vertices are.

Search
------
Each connector d with neighbours {x, y} acts as an edge x - y between hubs. A
cycle is grown from connector d0 by depth-first search, alternating hub and
connector, using only connectors with a larger index than d0, and closed at x
with an even number of connectors. Closed cycles are checked for chords and
deduplicated by vertex set.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from .core import BaseProcessor, ExperimentSchema, NotASpecialCycle
from .graph_core import BipartiteGraph, Graph, connected_components


AnyGraph = Union[Graph, BipartiteGraph]


@dataclass(frozen=True)
class CycleRecord:
    """
    One special cycle in cyclic order ``[h1, d1, h2, d2, ...]``.

    Odd positions (0-based) hold the degree-2 connectors.
    """
    vertices: Tuple[int, ...]
    kind: str  # 'special', '1-special' or '2-special'
    isolated: bool

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def connectors(self) -> Tuple[int, ...]:
        return self.vertices[1::2]

    def to_dict(self) -> dict:
        return {
            'vertices': list(self.vertices),
            'length': self.length,
            'kind': self.kind,
            'isolated': self.isolated,
        }


@dataclass
class SpecialCycleReport:
    """Special cycles found in a graph with their weighted counts"""
    cycles: List[CycleRecord] = field(default_factory=list)
    s: Optional[int] = None
    s1: Optional[int] = None
    s2: Optional[int] = None
    truncated: bool = False
    max_length: int = 0

    def disjoint_count(self) -> int:
        """Size of a greedy family of pairwise vertex-disjoint special cycles"""
        taken = set()
        count = 0
        for record in self.cycles:
            if taken.isdisjoint(record.vertices):
                taken.update(record.vertices)
                count += 1
        return count

    def to_dict(self) -> dict:
        return {
            's': self.s,
            's1': self.s1,
            's2': self.s2,
            'truncated': self.truncated,
            'max_length': self.max_length,
            'cycles': [c.to_dict() for c in self.cycles],
        }


@dataclass
class CycleCensus:
    counts: Dict[int, int] = field(default_factory=dict)
    q: int = 0


# =============================================================================
# Search
# =============================================================================

class _CycleSearch:
    """Depth-first special-cycle search with a fixed connector set."""

    def __init__(self, G: AnyGraph, connector: Sequence[bool], cap: int, kind: str):
        self.G = G
        self.connector = connector
        self.cap = cap
        self.kind = kind
        self.truncated = False
        self.found: Dict[FrozenSet[int], CycleRecord] = {}

    def run(self) -> List[CycleRecord]:
        G = self.G
        for d0 in range(G.n):
            if not self.connector[d0]:
                continue
            x, y = G.adjacency[d0]
            self.d0 = d0
            self.x = x
            self.path = [x, d0, y]
            self.used = {x, d0, y}
            self._extend(y, 1)
        return list(self.found.values())

    def _blocked(self, length: int) -> bool:
        """True when the cap, rather than the vertex count, rules out ``length``"""
        if length <= self.cap:
            return False
        if length <= self.G.n:
            self.truncated = True
        return True

    def _extend(self, hub: int, connectors: int) -> None:
        G = self.G
        for d in G.adjacency[hub]:
            if d <= self.d0 or not self.connector[d] or d in self.used:
                continue
            a, b = G.adjacency[d]
            z = b if a == hub else a

            if z == self.x:
                if (connectors + 1) % 2 == 0 and not self._blocked(2 * (connectors + 1)):
                    self._record(self.path + [d])
                continue
            if z in self.used or self._blocked(2 * (connectors + 2)):
                continue

            self.path.extend((d, z))
            self.used.update((d, z))
            self._extend(z, connectors + 1)
            self.path.pop()
            self.path.pop()
            self.used.discard(d)
            self.used.discard(z)

    def _record(self, vertices: List[int]) -> None:
        key = frozenset(vertices)
        if key in self.found:
            return
        hubs = vertices[0::2]
        if any(self.G.has_edge(a, b) for a, b in combinations(hubs, 2)):
            return
        isolated = all(self.G.degree(v) == 2 for v in vertices)
        self.found[key] = CycleRecord(vertices=tuple(vertices), kind=self.kind, isolated=isolated)


def _default_cap(G: AnyGraph) -> int:
    return min(G.n, ExperimentSchema.default('cycle_length_cap'))


class SpecialCycleFinder(BaseProcessor):
    """
    Enumerates special cycles of a Graph or BipartiteGraph.

    Parameters (keyword)
    --------------------
    max_length : int, optional
        Longest cycle searched; defaults to min(v(G), 64)
    """

    def process(self, data: AnyGraph) -> SpecialCycleReport:
        G = data
        cap = self.params.get('max_length') or _default_cap(G)
        if cap < 4:
            # nothing shorter than 4 can be special
            return SpecialCycleReport(
                s=None if isinstance(G, BipartiteGraph) else 0,
                s1=0 if isinstance(G, BipartiteGraph) else None,
                s2=0 if isinstance(G, BipartiteGraph) else None,
                max_length=cap,
            )

        degree_two = [G.degree(v) == 2 for v in range(G.n)]

        if isinstance(G, BipartiteGraph):
            left = [degree_two[v] and v < G.n1 for v in range(G.n)]
            right = [degree_two[v] and v >= G.n1 for v in range(G.n)]
            search1 = _CycleSearch(G, left, cap, '1-special')
            search2 = _CycleSearch(G, right, cap, '2-special')
            ones, twos = search1.run(), search2.run()
            report = SpecialCycleReport(
                cycles=ones + twos,
                s1=len(ones),
                s2=len(twos),
                truncated=search1.truncated or search2.truncated,
                max_length=cap,
            )
            self.logger.debug(f"Found s1={report.s1}, s2={report.s2} special cycles")
        else:
            search = _CycleSearch(G, degree_two, cap, 'special')
            cycles = search.run()
            report = SpecialCycleReport(
                cycles=cycles,
                s=sum(2 if c.isolated else 1 for c in cycles),
                truncated=search.truncated,
                max_length=cap,
            )
            self.logger.debug(f"Found {len(cycles)} special cycles (s={report.s})")

        if report.truncated:
            self.logger.warning(f"Special-cycle search hit the length cap {cap}")
        return report


def enumerate_special_cycles(G: AnyGraph, max_length: Optional[int] = None) -> SpecialCycleReport:
    """
    Convenience function to enumerate the special cycles of a graph.
    """
    return SpecialCycleFinder(max_length=max_length).process(G)


# =============================================================================
# Kernel vectors
# =============================================================================

def _as_vertices(cycle: Union[CycleRecord, Sequence[int]]) -> List[int]:
    if isinstance(cycle, CycleRecord):
        return list(cycle.vertices)
    return [int(v) for v in cycle]


def _connector_offset(G: AnyGraph, vertices: List[int]) -> int:
    """
    Validate ``vertices`` as a special cycle of G and return 0 if the
    connectors sit at odd positions, 1 if they sit at even positions.
    """
    k = len(vertices)
    if k < 4 or k % 4 or len(set(vertices)) != k:
        raise NotASpecialCycle(f"length {k} is not a positive multiple of 4 with distinct vertices")
    for v in vertices:
        if not 0 <= v < G.n:
            raise NotASpecialCycle(f"vertex {v} outside the graph")
    for a, b in zip(vertices, vertices[1:] + vertices[:1]):
        if not G.has_edge(a, b):
            raise NotASpecialCycle(f"({a}, {b}) is not an edge")
    members = set(vertices)
    inner_edges = sum(1 for v in vertices for w in G.adjacency[v] if w in members) // 2
    if inner_edges != k:
        raise NotASpecialCycle("cycle is not induced")

    for offset in (0, 1):
        if all(G.degree(v) == 2 for v in vertices[1 - offset::2]):
            return offset
    raise NotASpecialCycle("no alternate set of cycle vertices has degree 2")


def special_kernel_vector(G: AnyGraph, cycle: Union[CycleRecord, Sequence[int]]) -> np.ndarray:
    """
    Integer kernel vector of a special cycle.

    Entries alternate +1, -1 along the degree-2 vertices of the cycle and are
    zero elsewhere. For a Graph the vector has length v(G) and A(G) v = 0.
    For a BipartiteGraph it is a left kernel vector of B(G) (length n1) when
    the degree-2 vertices lie in V1 and a right kernel vector (length n2)
    when they lie in V2.

    Raises
    ------
    NotASpecialCycle
    """
    vertices = _as_vertices(cycle)
    offset = _connector_offset(G, vertices)
    connectors = vertices[1 - offset::2]

    if isinstance(G, BipartiteGraph):
        sides = {G.side(v) for v in connectors}
        if len(sides) != 1:
            raise NotASpecialCycle("degree-2 vertices lie on both sides")
        if sides == {1}:
            vector = np.zeros(G.n1, dtype=np.int64)
            shift = 0
        else:
            vector = np.zeros(G.n2, dtype=np.int64)
            shift = G.n1
    else:
        vector = np.zeros(G.n, dtype=np.int64)
        shift = 0

    for j, v in enumerate(connectors):
        vector[v - shift] = 1 if j % 2 == 0 else -1
    return vector


# =============================================================================
# Census
# =============================================================================

def isolated_cycle_census(G: AnyGraph) -> CycleCensus:
    """Components that are cycles, bucketed by length; q counts the odd ones"""
    counts: Dict[int, int] = {}
    for component in connected_components(G):
        if len(component) >= 3 and all(G.degree(v) == 2 for v in component):
            counts[len(component)] = counts.get(len(component), 0) + 1
    q = sum(c for length, c in counts.items() if length % 2)
    return CycleCensus(counts=dict(sorted(counts.items())), q=q)
