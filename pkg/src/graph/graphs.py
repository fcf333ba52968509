"""
Immutable graph containers: undirected, node-weighted, directed, and vertex orderings.

Vertex ids are dense integers 0..n-1. Adjacency is stored in CSR form
(``indptr``/``indices``) with sorted neighbor lists; all arrays are read-only.
"""
import hashlib
import math
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from ..utils.error_handler import GraphFormatError, InvalidArgumentError

Number = Union[int, float, str, Fraction]


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _edge_array(n: int, edges: Iterable[Sequence[int]]) -> np.ndarray:
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphFormatError(f"edges must be pairs, got array of shape {arr.shape}")
    if arr.min() < 0 or arr.max() >= n:
        raise GraphFormatError(f"edge endpoint outside vertex range 0..{n - 1}")
    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        v = int(arr[loops][0, 0])
        raise GraphFormatError(f"self-loop on vertex {v} rejected (graphs must be simple)")
    return arr


def _csr(n: int, sources: np.ndarray, targets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((targets, sources))
    indices = targets[order]
    counts = np.bincount(sources, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return _frozen(indptr), _frozen(indices.astype(np.int64))


class Graph:
    """Simple undirected graph without self-loops or parallel edges."""

    __slots__ = ("n", "_edges", "_indptr", "_indices")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise GraphFormatError(f"vertex count must be nonnegative, got {n}")
        arr = _edge_array(n, edges)
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        keys = lo * max(n, 1) + hi
        unique_keys, counts = np.unique(keys, return_counts=True)
        if (counts > 1).any():
            dup = int(unique_keys[counts > 1][0])
            raise GraphFormatError(
                f"duplicate edge {{{dup // max(n, 1)}, {dup % max(n, 1)}}} rejected (graphs must be simple)"
            )
        canonical = np.stack([unique_keys // max(n, 1), unique_keys % max(n, 1)], axis=1)
        self.n = int(n)
        self._edges = _frozen(canonical.astype(np.int64).reshape(-1, 2))
        both_src = np.concatenate([self._edges[:, 0], self._edges[:, 1]])
        both_dst = np.concatenate([self._edges[:, 1], self._edges[:, 0]])
        self._indptr, self._indices = _csr(self.n, both_src, both_dst)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, edges)

    @property
    def m(self) -> int:
        return int(self._edges.shape[0])

    @property
    def edges(self) -> np.ndarray:
        """Canonical (u < v) edge array sorted lexicographically, shape (m, 2)."""
        return self._edges

    def neighbors(self, v: int) -> np.ndarray:
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self._indptr[v + 1] - self._indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(u) for u in self.neighbors(v)) for v in range(self.n))

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = int(np.searchsorted(nbrs, v))
        return i < nbrs.size and int(nbrs[i]) == v

    def toggle_edge(self, u: int, v: int) -> "Graph":
        """Neighboring graph: the same graph with edge {u, v} added or removed."""
        if self.has_edge(u, v):
            lo, hi = min(u, v), max(u, v)
            keep = ~((self._edges[:, 0] == lo) & (self._edges[:, 1] == hi))
            return Graph(self.n, self._edges[keep])
        return Graph(self.n, np.vstack([self._edges, [[u, v]]]))

    def content_hash(self) -> str:
        """SHA-256 of the canonical edge list."""
        sha256_hash = hashlib.sha256()
        sha256_hash.update(f"undirected n={self.n}\n".encode())
        sha256_hash.update(self._edges.astype("<i8").tobytes())
        return sha256_hash.hexdigest()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and np.array_equal(self._edges, other._edges)
        )

    def __hash__(self) -> int:
        return hash(self.content_hash())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def to_cost(value: Number) -> Fraction:
    """Exact cost value; decimal strings stay exact decimals."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    return Fraction(float(value))


class NodeWeightedGraph:
    """Undirected graph with a cost c_v >= 1 on every vertex."""

    __slots__ = ("graph", "costs", "c_max", "_cost_array")

    def __init__(self, graph: Graph, costs: Sequence[Number]):
        if len(costs) != graph.n:
            raise GraphFormatError(f"expected {graph.n} costs, got {len(costs)}")
        exact = tuple(to_cost(c) for c in costs)
        for v, c in enumerate(exact):
            if c < 1:
                raise GraphFormatError(f"vertex {v} has cost {float(c)} < 1; costs must be at least 1")
        self.graph = graph
        self.costs = exact
        self.c_max = max(exact) if exact else Fraction(1)
        self._cost_array = _frozen(np.array([float(c) for c in exact], dtype=np.float64))

    @classmethod
    def unit(cls, graph: Graph) -> "NodeWeightedGraph":
        return cls(graph, [1] * graph.n)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def cost_array(self) -> np.ndarray:
        return self._cost_array

    def cost(self, vertices: Iterable[int]) -> Fraction:
        return sum((self.costs[v] for v in vertices), Fraction(0))

    def content_hash(self) -> str:
        sha256_hash = hashlib.sha256(self.graph.content_hash().encode())
        sha256_hash.update(",".join(str(c) for c in self.costs).encode())
        return sha256_hash.hexdigest()

    def __repr__(self) -> str:
        return f"NodeWeightedGraph(n={self.n}, m={self.graph.m}, c_max={float(self.c_max)})"


class DirectedGraph:
    """Simple directed graph; an edge (u, v) points from tail u to head v."""

    __slots__ = ("n", "_edges", "_out_ptr", "_out_idx", "_in_ptr", "_in_idx")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise GraphFormatError(f"vertex count must be nonnegative, got {n}")
        arr = _edge_array(n, edges)
        keys = arr[:, 0] * max(n, 1) + arr[:, 1]
        unique_keys, counts = np.unique(keys, return_counts=True)
        if (counts > 1).any():
            dup = int(unique_keys[counts > 1][0])
            raise GraphFormatError(
                f"duplicate edge ({dup // max(n, 1)}, {dup % max(n, 1)}) rejected (graphs must be simple)"
            )
        self.n = int(n)
        self._edges = _frozen(
            np.stack([unique_keys // max(n, 1), unique_keys % max(n, 1)], axis=1).astype(np.int64).reshape(-1, 2)
        )
        self._out_ptr, self._out_idx = _csr(self.n, self._edges[:, 0], self._edges[:, 1])
        self._in_ptr, self._in_idx = _csr(self.n, self._edges[:, 1], self._edges[:, 0])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "DirectedGraph":
        return cls(n, edges)

    @property
    def m(self) -> int:
        return int(self._edges.shape[0])

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    def out_neighbors(self, v: int) -> np.ndarray:
        return self._out_idx[self._out_ptr[v]:self._out_ptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self._in_idx[self._in_ptr[v]:self._in_ptr[v + 1]]

    def out_adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(u) for u in self.out_neighbors(v)) for v in range(self.n))

    def cross_degree(self, v: int, heads: Iterable[int]) -> int:
        """Number of out-edges of v landing in ``heads``."""
        return int(np.isin(self.out_neighbors(v), np.fromiter(heads, dtype=np.int64)).sum())

    def content_hash(self) -> str:
        sha256_hash = hashlib.sha256()
        sha256_hash.update(f"directed n={self.n}\n".encode())
        sha256_hash.update(self._edges.astype("<i8").tobytes())
        return sha256_hash.hexdigest()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DirectedGraph)
            and self.n == other.n
            and np.array_equal(self._edges, other._edges)
        )

    def __hash__(self) -> int:
        return hash(self.content_hash())

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.m})"


class Ordering:
    """A permutation of 0..n-1 together with its inverse (vertex -> rank)."""

    __slots__ = ("perm", "position")

    def __init__(self, perm: Sequence[int]):
        arr = np.asarray(perm, dtype=np.int64).reshape(-1)
        n = arr.size
        if n and (arr.min() < 0 or arr.max() >= n or np.unique(arr).size != n):
            raise InvalidArgumentError("ordering must be a permutation of 0..n-1")
        position = np.empty(n, dtype=np.int64)
        position[arr] = np.arange(n, dtype=np.int64)
        self.perm = _frozen(arr)
        self.position = _frozen(position)

    @classmethod
    def identity(cls, n: int) -> "Ordering":
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def by_scores_desc(cls, scores: np.ndarray) -> "Ordering":
        """Nonincreasing order of ``scores``; equal scores go by ascending vertex id."""
        scores = np.asarray(scores, dtype=np.float64)
        return cls(np.lexsort((np.arange(scores.size), -scores)))

    @property
    def n(self) -> int:
        return int(self.perm.size)

    def prefix(self, length: int) -> frozenset:
        return frozenset(int(v) for v in self.perm[:length])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ordering) and np.array_equal(self.perm, other.perm)

    def __hash__(self) -> int:
        return hash(self.perm.tobytes())

    def __repr__(self) -> str:
        return f"Ordering({self.perm.tolist()})"


def lift_costs(t: Union[float, Fraction]) -> Tuple[Union[float, Fraction], Union[float, Fraction], Union[float, Fraction]]:
    """
    Rescaled bipartite-lift costs for scale t.

    Returns:
        (alpha, left cost 1/(2 t alpha), right cost t/(2 alpha)); the smaller
        of the two costs is exactly 1.
    """
    if t <= 0:
        raise InvalidArgumentError(f"lift scale t must be positive, got {t}")
    if isinstance(t, int):
        t = Fraction(t)
    one = t / t
    # alpha = min(1/(2t), t/2) resolves the two cost formulas to 1 and t^2 (or 1/t^2 and 1)
    if t >= 1:
        return one / (2 * t), one, t * t
    return t / 2, one / (t * t), one


def log_ceil(value: float, base: float) -> int:
    """Integer ceiling of log_base(value), robust to float noise at exact powers."""
    if value <= 1:
        return 0
    return int(math.ceil(math.log(value) / math.log(base) - 1e-9))
