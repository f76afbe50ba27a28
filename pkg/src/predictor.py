"""
Combinatorial rank predictions

Corank and matching-number formulas assembled from leaf removal and
special-cycle counts of the Karp-Sipser core:
- corank A(G) = i(G) + s(core)
- corank B(G) = max(i1 + s1(core), i2 + s2(core))
- nu(G) = floor((v(G) - i(G) - q(core)) / 2)

For bipartite inputs the exact corank is taken as max(n1, n2) - rank B(G);
with n1 = n2 this is the kernel dimension on either side.
"""

from dataclasses import asdict, dataclass
from typing import Optional, Union

from .cycles import enumerate_special_cycles, isolated_cycle_census
from .graph_core import BipartiteGraph, Graph
from .linalg import max_matching, rank_adjacency, rank_biadjacency
from .peeling import karp_sipser


@dataclass
class Prediction:
    """
    A predicted corank (or matching number) with the pieces it was built from.

    ``lower_bound`` is set when the special-cycle search was truncated, so
    the prediction may undercount.
    """
    kind: str  # 'adjacency', 'biadjacency' or 'matching'
    predicted: int
    i: int = 0
    i1: Optional[int] = None
    i2: Optional[int] = None
    s: Optional[int] = None
    s1: Optional[int] = None
    s2: Optional[int] = None
    q: Optional[int] = None
    lower_bound: bool = False
    exact: Optional[int] = None
    defect: Optional[int] = None

    @property
    def ks_bound(self) -> int:
        """Corank lower bound from leaf removal alone"""
        if self.i1 is not None:
            return max(self.i1, self.i2)
        return self.i

    @property
    def agrees(self) -> Optional[bool]:
        return None if self.exact is None else self.exact == self.predicted

    def to_dict(self) -> dict:
        return asdict(self)


def _bipartite_corank(B: BipartiteGraph, method: str) -> int:
    return max(B.n1, B.n2) - rank_biadjacency(B, method=method).rank


def exact_corank(G: Union[Graph, BipartiteGraph], method: str = 'modular') -> int:
    """Corank of A(G), or max(n1, n2) - rank B(G) for a BipartiteGraph"""
    if isinstance(G, BipartiteGraph):
        return _bipartite_corank(G, method)
    return rank_adjacency(G, method=method).corank


def predict_corank_adjacency(G: Graph, with_exact: bool = False, method: str = 'modular') -> Prediction:
    """
    Predict corank A(G) as i(G) + s(core_KS(G)).

    With ``with_exact`` the exact corank and the defect over the leaf-removal
    bound (exact corank - i) are attached.
    """
    ks = karp_sipser(G)
    report = enumerate_special_cycles(ks.core)
    prediction = Prediction(
        kind='adjacency',
        predicted=ks.i + report.s,
        i=ks.i,
        s=report.s,
        lower_bound=report.truncated,
    )
    if with_exact:
        prediction.exact = exact_corank(G, method)
        prediction.defect = prediction.exact - prediction.ks_bound
    return prediction


def predict_corank_biadjacency(B: BipartiteGraph, with_exact: bool = False, method: str = 'modular') -> Prediction:
    """
    Predict the corank of B(G) as max(i1 + s1(core), i2 + s2(core)).
    """
    ks = karp_sipser(B)
    report = enumerate_special_cycles(ks.core)
    prediction = Prediction(
        kind='biadjacency',
        predicted=max(ks.i1 + report.s1, ks.i2 + report.s2),
        i=ks.i,
        i1=ks.i1,
        i2=ks.i2,
        s1=report.s1,
        s2=report.s2,
        lower_bound=report.truncated,
    )
    if with_exact:
        prediction.exact = _bipartite_corank(B, method)
        prediction.defect = prediction.exact - prediction.ks_bound
    return prediction


def predict_matching_number(G: Graph, with_exact: bool = False) -> Prediction:
    """
    Predict nu(G) as floor((v(G) - i(G) - q(core_KS(G))) / 2).
    """
    ks = karp_sipser(G)
    census = isolated_cycle_census(ks.core)
    prediction = Prediction(
        kind='matching',
        predicted=(G.n - ks.i - census.q) // 2,
        i=ks.i,
        q=census.q,
    )
    if with_exact:
        prediction.exact = max_matching(G)
    return prediction


def predict(G: Union[Graph, BipartiteGraph], with_exact: bool = False, method: str = 'modular') -> Prediction:
    """Corank prediction for either kind of graph"""
    if isinstance(G, BipartiteGraph):
        return predict_corank_biadjacency(G, with_exact, method)
    return predict_corank_adjacency(G, with_exact, method)


def ks_bound_defect(G: Union[Graph, BipartiteGraph], method: str = 'modular') -> int:
    """
    Excess of the exact corank over the leaf-removal bound.

    corank A(G) - i(G) for a Graph; (max(n1, n2) - rank B(G)) - max(i1, i2)
    for a BipartiteGraph. Never negative.
    """
    ks = karp_sipser(G)
    if isinstance(G, BipartiteGraph):
        return _bipartite_corank(G, method) - max(ks.i1, ks.i2)
    return rank_adjacency(G, method=method).corank - ks.i
