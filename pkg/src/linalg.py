"""
Exact rank oracle, matchings and sigma

- rank over F_p by dense elimination (vectorised int64 for p < 2^31, uint64
  with digit-wise products for p < 2^62, Python integers above)
- exact rank by fraction-free (Bareiss) elimination over Python integers
- rank of A(G) and B(G) as a RankReport with the method and primes used
- matching number (Hopcroft-Karp for bipartite inputs, blossom otherwise)
- sigma(G), the largest permutation submatrix of A(G)
"""

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from sympy import isprime, prevprime

from .core import ExactSizeExceeded, ExperimentSchema, NotPrime
from .graph_core import BipartiteGraph, Graph, bipartite_double, to_networkx


logger = logging.getLogger('ksrank.linalg')


def _largest_primes_below(bound: int, count: int) -> Tuple[int, ...]:
    primes = []
    while len(primes) < count:
        bound = prevprime(bound)
        primes.append(int(bound))
    return tuple(primes)


# three largest primes below 2^62
PRODUCTION_PRIMES: Tuple[int, ...] = _largest_primes_below(1 << 62, 3)

# residues below 2^31 multiply inside int64
_INT64_PRIME_LIMIT = 1 << 31
# residues below 2^62 leave room for a shift by two bits in uint64
_UINT64_PRIME_LIMIT = 1 << 62


@dataclass
class RankReport:
    """
    Rank of a matrix with its provenance.

    ``corank`` is the kernel dimension (columns minus rank); ``left_corank``
    is rows minus rank.
    """
    rank: int
    shape: Tuple[int, int]
    method: str  # 'modular' or 'exact'
    primes: List[int] = field(default_factory=list)
    per_prime_ranks: List[int] = field(default_factory=list)

    @property
    def corank(self) -> int:
        return self.shape[1] - self.rank

    @property
    def left_corank(self) -> int:
        return self.shape[0] - self.rank

    def to_dict(self) -> dict:
        return {
            'rank': self.rank,
            'corank': self.corank,
            'left_corank': self.left_corank,
            'shape': list(self.shape),
            'method': self.method,
            'primes': list(self.primes),
            'per_prime_ranks': list(self.per_prime_ranks),
        }


# =============================================================================
# Matrices
# =============================================================================

def adjacency_matrix(G: Union[Graph, BipartiteGraph]) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix"""
    A = np.zeros((G.n, G.n), dtype=np.int64)
    if G.edges:
        edges = np.asarray(G.edges, dtype=np.int64)
        A[edges[:, 0], edges[:, 1]] = 1
        A[edges[:, 1], edges[:, 0]] = 1
    return A


def biadjacency_matrix(B: BipartiteGraph) -> np.ndarray:
    """n1 x n2 matrix with a 1 for every edge (row in V1, column in V2)"""
    M = np.zeros((B.n1, B.n2), dtype=np.int64)
    if B.edges:
        edges = np.asarray(B.local_edges(), dtype=np.int64)
        M[edges[:, 0], edges[:, 1]] = 1
    return M


# =============================================================================
# Elimination
# =============================================================================

def _mulmod_plain(a, b, p):
    return (a * b) % p


def _mulmod_wide(a: np.ndarray, b, p: np.uint64) -> np.ndarray:
    """
    Elementwise a * b mod p for uint64 residues with p < 2^62.

    Horner over the base-4 digits of ``b``: every partial value stays below
    4p, so nothing wraps.
    """
    two = np.uint64(2)
    three = np.uint64(3)
    acc = np.zeros(np.broadcast(a, b).shape, dtype=np.uint64)
    for shift in range(60, -1, -2):
        digit = (b >> np.uint64(shift)) & three
        acc = (acc << two) % p
        acc = (acc + (a * digit) % p) % p
    return acc


def _eliminate_mod_p(A: np.ndarray, p: int) -> int:
    """Row-echelon elimination of ``A`` in place over F_p; returns the rank"""
    mulmod = _mulmod_wide if A.dtype == np.uint64 else _mulmod_plain
    scalar = A.dtype.type
    modulus = scalar(p)
    rows, cols = A.shape
    r = 0
    for col in range(cols):
        if r == rows:
            break
        nonzero = np.flatnonzero(A[r:, col])
        if nonzero.size == 0:
            continue
        pivot = r + int(nonzero[0])
        if pivot != r:
            A[[r, pivot]] = A[[pivot, r]]

        inv = scalar(pow(int(A[r, col]), -1, p))
        A[r, col:] = mulmod(A[r, col:], inv, modulus)

        # only rows with a nonzero in the pivot column change
        below = r + 1 + np.flatnonzero(A[r + 1:, col])
        if below.size:
            products = mulmod(A[r, col:][None, :], A[below, col][:, None], modulus)
            A[below, col:] = (A[below, col:] + (modulus - products)) % modulus
        r += 1
    return r


def rank_mod_prime(M, p: int) -> int:
    """
    Rank of an integer matrix over the field with p elements.

    Never exceeds the rank over the rationals.

    Raises
    ------
    NotPrime
        If p is not prime
    """
    p = int(p)
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")

    if p < _INT64_PRIME_LIMIT:
        A = np.array(M, dtype=np.int64) % p
    elif p < _UINT64_PRIME_LIMIT:
        A = (np.array(M, dtype=np.int64) % p).astype(np.uint64)
    else:
        A = np.array(np.asarray(M).tolist(), dtype=object) % p
    if A.ndim != 2 or A.size == 0:
        return 0
    return _eliminate_mod_p(A, p)


def rank_exact(M) -> int:
    """
    Rank over the rationals by fraction-free two-row elimination.

    Every intermediate entry is a minor of ``M``, so the divisions are exact.

    Raises
    ------
    ExactSizeExceeded
        If either dimension exceeds the exact-size cap
    """
    rows_list = [[int(x) for x in row] for row in np.asarray(M).tolist()]
    rows = len(rows_list)
    cols = len(rows_list[0]) if rows else 0
    cap = ExperimentSchema.default('exact_size_cap')
    if max(rows, cols) > cap:
        raise ExactSizeExceeded(f"exact rank limited to {cap}x{cap}, got {rows}x{cols}")

    A = rows_list
    r = 0
    previous = 1
    for col in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        head = A[r][col]
        for i in range(r + 1, rows):
            factor = A[i][col]
            row = A[i]
            for j in range(col + 1, cols):
                row[j] = (head * row[j] - factor * A[r][j]) // previous
            row[col] = 0
        previous = head
        r += 1
    return r


def _rank_report(M: np.ndarray, method: str, primes: Sequence[int]) -> RankReport:
    shape = (int(M.shape[0]), int(M.shape[1]))
    if method == 'exact':
        return RankReport(rank=rank_exact(M), shape=shape, method='exact')
    if method != 'modular':
        raise ValueError(f"Unknown rank method: {method}")

    per_prime = [rank_mod_prime(M, p) for p in primes]
    return RankReport(
        rank=max(per_prime) if per_prime else 0,
        shape=shape,
        method='modular',
        primes=[int(p) for p in primes],
        per_prime_ranks=per_prime,
    )


def rank_adjacency(
    G: Union[Graph, BipartiteGraph],
    method: str = 'modular',
    primes: Sequence[int] = PRODUCTION_PRIMES,
) -> RankReport:
    """
    Rank of the adjacency matrix A(G).

    ``modular`` takes the largest rank over the given primes; ``exact`` is
    ground truth for v(G) up to the exact-size cap.
    """
    return _rank_report(adjacency_matrix(G), method, primes)


def rank_biadjacency(
    B: BipartiteGraph,
    method: str = 'modular',
    primes: Sequence[int] = PRODUCTION_PRIMES,
) -> RankReport:
    """Rank of the n1 x n2 biadjacency matrix B(G)"""
    return _rank_report(biadjacency_matrix(B), method, primes)


# =============================================================================
# Matchings
# =============================================================================

def max_matching(G: Union[Graph, BipartiteGraph]) -> int:
    """
    Matching number nu(G).

    Bipartite inputs use Hopcroft-Karp, general graphs the blossom algorithm.
    """
    H = to_networkx(G)
    if isinstance(G, BipartiteGraph):
        matching = nx.bipartite.hopcroft_karp_matching(H, top_nodes=range(G.n1))
        return len(matching) // 2
    return len(nx.max_weight_matching(H, maxcardinality=True))


def sigma(G: Graph) -> int:
    """
    Largest number of vertices covered by vertex-disjoint cycles and edges.

    Equals the size of the largest permutation submatrix of A(G), i.e. the
    matching number of the rows x columns double of G.
    """
    return max_matching(bipartite_double(G))
