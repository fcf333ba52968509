"""
Density functions and peeling-order statistics.

Densities are exact ``Fraction`` values (integer numerator and denominator)
except the directed density, whose square root is irrational in general; its
exact square is available through ``directed_density_squared``.
"""
import math
from fractions import Fraction
from typing import Iterable, Tuple

import numpy as np

from ..utils.error_handler import EmptySubsetError, InvalidArgumentError
from .graphs import DirectedGraph, Graph, NodeWeightedGraph, Ordering


def _mask(n: int, vertices: Iterable[int]) -> np.ndarray:
    idx = np.fromiter((int(v) for v in vertices), dtype=np.int64)
    if idx.size == 0:
        raise EmptySubsetError()
    if idx.min() < 0 or idx.max() >= n:
        raise InvalidArgumentError(f"subset contains a vertex outside 0..{n - 1}")
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    return mask


def induced_edges(g: Graph, vertices: Iterable[int]) -> int:
    """|E(S)|, the number of edges with both endpoints in S."""
    mask = _mask(g.n, vertices)
    e = g.edges
    return int(np.count_nonzero(mask[e[:, 0]] & mask[e[:, 1]]))


def density(g: Graph, vertices: Iterable[int]) -> Fraction:
    """rho(S) = |E(S)| / |S|."""
    mask = _mask(g.n, vertices)
    e = g.edges
    edges_inside = int(np.count_nonzero(mask[e[:, 0]] & mask[e[:, 1]]))
    return Fraction(edges_inside, int(mask.sum()))


def weighted_density(g: NodeWeightedGraph, vertices: Iterable[int]) -> Fraction:
    """rho(S) = |E(S)| / c(S)."""
    mask = _mask(g.n, vertices)
    e = g.graph.edges
    edges_inside = int(np.count_nonzero(mask[e[:, 0]] & mask[e[:, 1]]))
    return Fraction(edges_inside) / g.cost(np.flatnonzero(mask).tolist())


def cross_edges(g: DirectedGraph, sources: Iterable[int], targets: Iterable[int]) -> int:
    """|E(S, T)|, edges u -> v with u in S and v in T."""
    s_mask = _mask(g.n, sources)
    t_mask = _mask(g.n, targets)
    e = g.edges
    return int(np.count_nonzero(s_mask[e[:, 0]] & t_mask[e[:, 1]]))


def directed_density_squared(g: DirectedGraph, sources: Iterable[int], targets: Iterable[int]) -> Fraction:
    """Exact rho(S, T)^2 = |E(S, T)|^2 / (|S| |T|)."""
    s_mask = _mask(g.n, sources)
    t_mask = _mask(g.n, targets)
    e = g.edges
    count = int(np.count_nonzero(s_mask[e[:, 0]] & t_mask[e[:, 1]]))
    return Fraction(count * count, int(s_mask.sum()) * int(t_mask.sum()))


def directed_density(g: DirectedGraph, sources: Iterable[int], targets: Iterable[int]) -> float:
    """rho(S, T) = |E(S, T)| / sqrt(|S| |T|)."""
    s_mask = _mask(g.n, sources)
    t_mask = _mask(g.n, targets)
    e = g.edges
    count = int(np.count_nonzero(s_mask[e[:, 0]] & t_mask[e[:, 1]]))
    return count / math.sqrt(int(s_mask.sum()) * int(t_mask.sum()))


def peel_counts(g: Graph, sigma: Ordering) -> np.ndarray:
    """
    q(sigma): for every vertex, the number of its neighbors that precede it in sigma.

    Args:
        g: Graph
        sigma: Ordering over exactly the vertices of g

    Returns:
        Integer array indexed by vertex id
    """
    if sigma.n != g.n:
        raise InvalidArgumentError(f"ordering covers {sigma.n} vertices, graph has {g.n}")
    e = g.edges
    pos = sigma.position
    later = np.where(pos[e[:, 0]] < pos[e[:, 1]], e[:, 1], e[:, 0])
    return np.bincount(later, minlength=g.n).astype(np.int64)


def best_prefix(g: Graph, sigma: Ordering) -> Tuple[frozenset, Fraction]:
    """
    Densest prefix S*_sigma of an ordering, ties broken toward the shorter prefix.

    Returns:
        (prefix vertex set, exact density)
    """
    if g.n == 0:
        raise EmptySubsetError()
    cumulative = np.cumsum(peel_counts(g, sigma)[sigma.perm])
    best_edges, best_size = int(cumulative[0]), 1
    for size in range(2, g.n + 1):
        edges_inside = int(cumulative[size - 1])
        if edges_inside * best_size > best_edges * size:
            best_edges, best_size = edges_inside, size
    return sigma.prefix(best_size), Fraction(best_edges, best_size)


def best_noisy_prefix(values_in_order: np.ndarray, denominators: np.ndarray) -> Tuple[int, float]:
    """
    Prefix length maximizing cumsum(values) / denominators, shortest on ties.

    Args:
        values_in_order: per-position (noisy) counts along the ordering
        denominators: per-position prefix sizes or prefix costs

    Returns:
        (prefix length, its estimated density)
    """
    if values_in_order.size == 0:
        raise EmptySubsetError()
    estimates = np.cumsum(values_in_order, dtype=np.float64) / denominators
    best = int(np.argmax(estimates))
    return best + 1, float(estimates[best])
