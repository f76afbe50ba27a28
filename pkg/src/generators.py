"""
Random graph samplers

Seedable samplers for every random-graph model the toolkit studies:
- G(n, p) and G(n1, n2, p) by geometric skipping over the pair index
- G(n, m) and G(n1, n2, m) uniform over edge sets of fixed size
- K(n, m, 2) / K(n1, n2, m, 2), uniform over simple graphs with m edges and
  minimum degree at least 2
- the configuration model and uniform simple graphs with a given degree sequence

Every sampler is a pure function of its parameters and a 64-bit seed.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from scipy import stats

from .analytics import truncated_poisson_from_mean
from .core import (
    BaseProcessor,
    ExperimentSchema,
    InfeasibleParameters,
    MASK64,
    OddDegreeSum,
    RejectionCapExceeded,
)
from .graph_core import BipartiteGraph, Graph, MultiGraph, build_bipartite_graph, build_graph


logger = logging.getLogger('ksrank.generators')


@dataclass
class SamplerConfig:
    """
    Parameters of one random-graph model.

    ``model`` is one of ``ExperimentSchema.MODELS``; which of ``n``/``n1``/
    ``n2``/``p``/``m``/``degrees`` matter depends on the model.
    """
    model: str
    n: int = 0
    n1: int = 0
    n2: int = 0
    p: Optional[float] = None
    m: Optional[int] = None
    degrees: Optional[Sequence[int]] = field(default=None, repr=False)
    seed: int = 0
    rejection_cap: int = ExperimentSchema.DEFAULTS['rejection_cap']
    method: str = 'configuration'

    def __post_init__(self):
        if self.model not in ExperimentSchema.MODELS:
            raise InfeasibleParameters(f"Unknown model: {self.model}")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise InfeasibleParameters(f"p must lie in [0, 1], got {self.p}")
        if self.m is not None and self.m < 0:
            raise InfeasibleParameters(f"m must be non-negative, got {self.m}")
        if self.rejection_cap < 1:
            raise InfeasibleParameters("rejection cap must be at least 1")
        self.seed = int(self.seed) & MASK64

    @property
    def bipartite(self) -> bool:
        return self.model in ('gnnp', 'gnnm', 'min2-bip')


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & MASK64)


def _cap(rejection_cap: Optional[int]) -> int:
    return ExperimentSchema.default('rejection_cap') if rejection_cap is None else int(rejection_cap)


# =============================================================================
# Binomial and uniform Erdos-Renyi models
# =============================================================================

def _geometric_positions(rng: np.random.Generator, total: int, p: float) -> np.ndarray:
    """Indices in ``0..total-1`` kept independently with probability p"""
    if total <= 0 or p <= 0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1:
        return np.arange(total, dtype=np.int64)

    chunk = int(total * p + 10 * np.sqrt(total * p) + 100)
    parts = []
    last = -1
    while True:
        gaps = rng.geometric(p, size=chunk)
        positions = last + np.cumsum(gaps)
        parts.append(positions[positions < total])
        if positions[-1] >= total:
            break
        last = int(positions[-1])
    return np.concatenate(parts)


def _pair_from_index(k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Invert k = v(v-1)/2 + u with 0 <= u < v"""
    v = ((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) // 2).astype(np.int64)
    # floating point can be off by one either way
    v = np.where(v * (v - 1) // 2 > k, v - 1, v)
    v = np.where((v + 1) * v // 2 <= k, v + 1, v)
    return k - v * (v - 1) // 2, v


def sample_gnp(n: int, p: float, seed: int = 0) -> Graph:
    """
    Erdos-Renyi G(n, p): every pair present independently with probability p.

    Expected running time is linear in the number of edges.
    """
    if not 0.0 <= p <= 1.0:
        raise InfeasibleParameters(f"p must lie in [0, 1], got {p}")
    positions = _geometric_positions(_rng(seed), n * (n - 1) // 2, p)
    u, v = _pair_from_index(positions)
    return build_graph(n, zip(u.tolist(), v.tolist()))


def sample_bipartite_gnp(n1: int, n2: int, p: float, seed: int = 0) -> BipartiteGraph:
    """Bipartite G(n1, n2, p) over the n1 * n2 cross pairs"""
    if not 0.0 <= p <= 1.0:
        raise InfeasibleParameters(f"p must lie in [0, 1], got {p}")
    if n2 == 0:
        return build_bipartite_graph(n1, n2, [])
    positions = _geometric_positions(_rng(seed), n1 * n2, p)
    return build_bipartite_graph(n1, n2, zip((positions // n2).tolist(), (positions % n2).tolist()))


def sample_gnm(n: int, m: int, seed: int = 0) -> Graph:
    """Uniform graph with exactly m edges"""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise InfeasibleParameters(f"G(n, m) needs 0 <= m <= {total}, got m={m}")
    positions = np.sort(_rng(seed).choice(total, size=m, replace=False)).astype(np.int64)
    u, v = _pair_from_index(positions)
    return build_graph(n, zip(u.tolist(), v.tolist()))


def sample_bipartite_gnm(n1: int, n2: int, m: int, seed: int = 0) -> BipartiteGraph:
    """Uniform bipartite graph with exactly m edges"""
    total = n1 * n2
    if not 0 <= m <= total:
        raise InfeasibleParameters(f"G(n1, n2, m) needs 0 <= m <= {total}, got m={m}")
    positions = np.sort(_rng(seed).choice(total, size=m, replace=False)).astype(np.int64)
    return build_bipartite_graph(n1, n2, zip((positions // n2).tolist(), (positions % n2).tolist()))


# =============================================================================
# Configuration model
# =============================================================================

def _stubs(degrees: np.ndarray) -> np.ndarray:
    return np.repeat(np.arange(degrees.size, dtype=np.int64), degrees)


def _pair_stubs(rng: np.random.Generator, stubs: np.ndarray) -> np.ndarray:
    """Uniform perfect matching of the stubs, as an (m, 2) array"""
    return rng.permutation(stubs).reshape(-1, 2)


def _pairs_are_simple(pairs: np.ndarray, n: int) -> bool:
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    if np.any(lo == hi):
        return False
    return np.unique(lo * n + hi).size == pairs.shape[0]


def _check_degrees(degrees: Sequence[int]) -> np.ndarray:
    d = np.asarray(list(degrees), dtype=np.int64)
    if d.size and d.min() < 0:
        raise InfeasibleParameters("degrees must be non-negative")
    if int(d.sum()) % 2:
        raise OddDegreeSum(f"degree sum {int(d.sum())} is odd")
    return d


def sample_configuration(d: Sequence[int], seed: int = 0) -> MultiGraph:
    """
    Configuration model: pair the degree stubs uniformly and contract.

    Loops contribute 2 to the degree of their vertex.
    """
    degrees = _check_degrees(d)
    pairs = _pair_stubs(_rng(seed), _stubs(degrees))
    return MultiGraph(n=int(degrees.size), edges=tuple(map(tuple, pairs.tolist())))


def _bipartite_pairs(rng: np.random.Generator, left_stubs: np.ndarray, right_stubs: np.ndarray) -> np.ndarray:
    return np.column_stack([left_stubs, rng.permutation(right_stubs)])


def _bipartite_pairs_are_simple(pairs: np.ndarray, n2: int) -> bool:
    return np.unique(pairs[:, 0] * n2 + pairs[:, 1]).size == pairs.shape[0]


def sample_with_degree_sequence(
    d: Optional[Sequence[int]],
    seed: int = 0,
    bipartite_split: Optional[Tuple[Sequence[int], Sequence[int]]] = None,
    rejection_cap: Optional[int] = None,
) -> Union[Graph, BipartiteGraph]:
    """
    Uniform simple graph with degree sequence ``d``.

    Repeats the configuration model until the result is simple. With
    ``bipartite_split=(d1, d2)`` the sample is a bipartite graph whose V1
    degrees are ``d1`` and V2 degrees are ``d2`` (``d`` is then ignored).

    Raises
    ------
    OddDegreeSum
        If the degree sum is odd
    InfeasibleParameters
        If the sequence is not graphical, or the bipartite sides have
        different sums
    RejectionCapExceeded
        If no simple realization is found within the cap
    """
    rng = _rng(seed)
    cap = _cap(rejection_cap)

    if bipartite_split is not None:
        d1 = np.asarray(list(bipartite_split[0]), dtype=np.int64)
        d2 = np.asarray(list(bipartite_split[1]), dtype=np.int64)
        if d1.sum() != d2.sum():
            raise InfeasibleParameters(f"side degree sums differ: {int(d1.sum())} != {int(d2.sum())}")
        if (d1.size and d1.max() > d2.size) or (d2.size and d2.max() > d1.size):
            raise InfeasibleParameters("a degree exceeds the size of the opposite side")
        left, right = _stubs(d1), _stubs(d2)
        for _ in range(cap):
            pairs = _bipartite_pairs(rng, left, right)
            if _bipartite_pairs_are_simple(pairs, max(d2.size, 1)):
                return build_bipartite_graph(int(d1.size), int(d2.size), pairs.tolist())
        raise RejectionCapExceeded(f"no simple bipartite realization in {cap} attempts")

    degrees = _check_degrees(d)
    if not nx.is_graphical(degrees.tolist()):
        raise InfeasibleParameters("degree sequence is not graphical")
    n = int(degrees.size)
    stubs = _stubs(degrees)
    for _ in range(cap):
        pairs = _pair_stubs(rng, stubs)
        if _pairs_are_simple(pairs, n):
            return build_graph(n, pairs.tolist())
    raise RejectionCapExceeded(f"no simple realization in {cap} attempts")


# =============================================================================
# Minimum-degree-2 models
# =============================================================================

def _truncated_poisson_degrees(rng: np.random.Generator, lam: float, size: int) -> np.ndarray:
    """i.i.d. Poisson(lam) draws conditioned on being at least 2"""
    at_least_two = stats.poisson.sf(1, lam)
    if at_least_two >= 0.05:
        d = rng.poisson(lam, size)
        low = d < 2
        while low.any():
            d[low] = rng.poisson(lam, int(low.sum()))
            low = d < 2
        return d.astype(np.int64)
    # inverse survival function on (0, P(Z >= 2)]
    q = at_least_two * (1.0 - rng.random(size))
    return np.maximum(stats.poisson.isf(q, lam), 2).astype(np.int64)


class _Attempts:
    """Shared rejection budget across degree draws and pairings"""

    def __init__(self, cap: int, label: str):
        self.left = cap
        self.cap = cap
        self.label = label

    def spend(self) -> None:
        if self.left <= 0:
            raise RejectionCapExceeded(f"{self.label}: no acceptance in {self.cap} attempts")
        self.left -= 1


class _DegreeDrawer:
    """Draws side degree sequences with a fixed sum of 2m (or m per side)."""

    def __init__(self, n: int, total: int):
        self.n = n
        self.total = total
        mean = total / n
        self.lam = None if mean == 2 else truncated_poisson_from_mean(mean).lam

    def draw(self, rng: np.random.Generator, attempts: _Attempts) -> np.ndarray:
        """Redraw until the sum hits ``total``; every draw spends one attempt"""
        while True:
            attempts.spend()
            if self.lam is None:
                return np.full(self.n, 2, dtype=np.int64)
            d = _truncated_poisson_degrees(rng, self.lam, self.n)
            if int(d.sum()) == self.total:
                return d


def sample_min2(
    n: int,
    m: int,
    seed: int = 0,
    method: str = 'configuration',
    rejection_cap: Optional[int] = None,
) -> Graph:
    """
    Uniform sample from K(n, m, 2): simple graphs with exactly m edges and
    minimum degree at least 2.

    Parameters
    ----------
    method : {'configuration', 'pairs'}
        ``configuration`` draws i.i.d. Poisson(lam) >= 2 degrees (lam
        calibrated to mean 2m/n), keeps them if they sum to 2m, pairs the stubs
        uniformly and accepts a simple outcome. Degrees are redrawn on every
        rejection, which makes the accepted graph exactly uniform.
        ``pairs`` draws m uniform vertex pairs with replacement and accepts iff
        the result is simple with minimum degree 2; exact but only practical
        for very small n.

    Raises
    ------
    InfeasibleParameters
        If m < n or m > n(n-1)/2
    RejectionCapExceeded
        If ``rejection_cap`` attempts fail
    """
    if m < n or m > n * (n - 1) // 2:
        raise InfeasibleParameters(f"K(n, m, 2) is empty for n={n}, m={m}")
    rng = _rng(seed)
    cap = _cap(rejection_cap)

    if method == 'pairs':
        for _ in range(cap):
            pairs = rng.integers(0, n, size=(m, 2))
            if _pairs_are_simple(pairs, n) and np.bincount(pairs.ravel(), minlength=n).min() >= 2:
                return build_graph(n, pairs.tolist())
        raise RejectionCapExceeded(f"K({n}, {m}, 2): no acceptance in {cap} attempts")

    if method != 'configuration':
        raise InfeasibleParameters(f"Unknown min-degree-2 sampling method: {method}")

    drawer = _DegreeDrawer(n, 2 * m)
    attempts = _Attempts(cap, f"K({n}, {m}, 2)")
    while True:
        pairs = _pair_stubs(rng, _stubs(drawer.draw(rng, attempts)))
        if _pairs_are_simple(pairs, n):
            return build_graph(n, pairs.tolist())


def sample_min2_bipartite(
    n1: int,
    n2: int,
    m: int,
    seed: int = 0,
    method: str = 'configuration',
    rejection_cap: Optional[int] = None,
) -> BipartiteGraph:
    """
    Uniform sample from K(n1, n2, m, 2).

    Same two methods as ``sample_min2``; the configuration route calibrates
    each side separately to mean degree m/n1 and m/n2.

    Raises
    ------
    InfeasibleParameters
        If m < 2 max(n1, n2) or m > n1 n2
    RejectionCapExceeded
    """
    if m < 2 * max(n1, n2) or m > n1 * n2:
        raise InfeasibleParameters(f"K(n1, n2, m, 2) is empty for n1={n1}, n2={n2}, m={m}")
    rng = _rng(seed)
    cap = _cap(rejection_cap)

    if method == 'pairs':
        for _ in range(cap):
            pairs = np.column_stack([rng.integers(0, n1, size=m), rng.integers(0, n2, size=m)])
            if (
                _bipartite_pairs_are_simple(pairs, n2)
                and np.bincount(pairs[:, 0], minlength=n1).min() >= 2
                and np.bincount(pairs[:, 1], minlength=n2).min() >= 2
            ):
                return build_bipartite_graph(n1, n2, pairs.tolist())
        raise RejectionCapExceeded(f"K({n1}, {n2}, {m}, 2): no acceptance in {cap} attempts")

    if method != 'configuration':
        raise InfeasibleParameters(f"Unknown min-degree-2 sampling method: {method}")

    # the two sides are conditioned on their sums independently
    left_drawer = _DegreeDrawer(n1, m)
    right_drawer = _DegreeDrawer(n2, m)
    attempts = _Attempts(cap, f"K({n1}, {n2}, {m}, 2)")
    while True:
        d1 = left_drawer.draw(rng, attempts)
        d2 = right_drawer.draw(rng, attempts)
        pairs = _bipartite_pairs(rng, _stubs(d1), _stubs(d2))
        if _bipartite_pairs_are_simple(pairs, n2):
            return build_bipartite_graph(n1, n2, pairs.tolist())


# =============================================================================
# Dispatch
# =============================================================================

class GraphSampler(BaseProcessor):
    """
    Draws one graph for a SamplerConfig.
    """

    def process(self, data: SamplerConfig) -> Union[Graph, BipartiteGraph]:
        config = data
        model = config.model
        cap = config.rejection_cap

        if model == 'gnp':
            graph = sample_gnp(config.n, config.p, config.seed)
        elif model == 'gnm':
            graph = sample_gnm(config.n, config.m, config.seed)
        elif model == 'gnnp':
            graph = sample_bipartite_gnp(config.n1, config.n2, config.p, config.seed)
        elif model == 'gnnm':
            graph = sample_bipartite_gnm(config.n1, config.n2, config.m, config.seed)
        elif model == 'min2':
            graph = sample_min2(config.n, config.m, config.seed, config.method, cap)
        elif model == 'min2-bip':
            graph = sample_min2_bipartite(config.n1, config.n2, config.m, config.seed, config.method, cap)
        else:
            graph = sample_with_degree_sequence(config.degrees, config.seed, rejection_cap=cap)

        self.logger.debug(f"Sampled {graph!r} from {model} (seed={config.seed})")
        return graph


def sample_graph(config: SamplerConfig) -> Union[Graph, BipartiteGraph]:
    """
    Convenience function to sample one graph from a configuration.
    """
    return GraphSampler().process(config)


def sampler_config_from_dict(config: Dict, seed: int) -> SamplerConfig:
    """
    Build the SamplerConfig of one trial from an experiment configuration.

    ``c`` is turned into ``p = c / n`` for the binomial models; bipartite
    models default to balanced sides ``n1 = n2 = n``.
    """
    model = config['model']
    n = int(config.get('n', 0))
    n1 = int(config.get('n1') or n)
    n2 = int(config.get('n2') or n)
    p = config.get('p')
    if p is None and config.get('c') is not None and model in ('gnp', 'gnnp'):
        p = min(1.0, float(config['c']) / (n if model == 'gnp' else max(n1, n2)))
    m = config.get('m')
    if m is None and config.get('c') is not None and model in ('gnm', 'gnnm'):
        m = int(round(float(config['c']) * (n / 2 if model == 'gnm' else max(n1, n2))))
    return SamplerConfig(
        model=model,
        n=n,
        n1=n1,
        n2=n2,
        p=p,
        m=None if m is None else int(m),
        degrees=config.get('degrees'),
        seed=seed,
        rejection_cap=int(config.get('rejection_cap', ExperimentSchema.default('rejection_cap'))),
        method=config.get('method', 'configuration'),
    )
