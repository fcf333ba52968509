"""
Seeded random graph generators for benchmarks and tests.
"""
from typing import List, Tuple, Union

import networkx as nx
import numpy as np

from ..utils.error_handler import InvalidArgumentError
from .graphs import DirectedGraph, Graph


def _check_probability(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"{name} must lie in [0, 1], got {p}")


def _undirected_edges(nx_graph: nx.Graph) -> List[Tuple[int, int]]:
    return [(int(u), int(v)) for u, v in nx_graph.edges()]


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p)."""
    _check_probability("p", p)
    return Graph(n, _undirected_edges(nx.gnp_random_graph(n, p, seed=seed)))


def directed_gnp(n: int, p: float, seed: int) -> DirectedGraph:
    _check_probability("p", p)
    nx_graph = nx.gnp_random_graph(n, p, seed=seed, directed=True)
    return DirectedGraph(n, [(int(u), int(v)) for u, v in nx_graph.edges()])


def planted_dense(
    n: int,
    k: int,
    p_in: float,
    p_out: float,
    seed: int,
    return_block: bool = False,
) -> Union[Graph, Tuple[Graph, List[int]]]:
    """
    G(n, p_out) background with an Erdos-Renyi block of k random vertices at density p_in.

    Args:
        n: Vertex count
        k: Planted block size (k <= n)
        p_in: Edge probability inside the block
        p_out: Background edge probability
        seed: Seed; the output is a pure function of the arguments
        return_block: Also return the sorted block vertices

    Returns:
        The graph, or (graph, block) when ``return_block`` is set
    """
    _check_probability("p_in", p_in)
    _check_probability("p_out", p_out)
    if not 0 <= k <= n:
        raise InvalidArgumentError(f"planted block size k={k} must lie in [0, n={n}]")
    rng = np.random.default_rng(seed)
    block = np.sort(rng.permutation(n)[:k])
    edges = set()
    for u, v in nx.gnp_random_graph(n, p_out, seed=seed).edges():
        edges.add((min(u, v), max(u, v)))
    for u, v in nx.gnp_random_graph(k, p_in, seed=seed + 1).edges():
        a, b = int(block[u]), int(block[v])
        edges.add((min(a, b), max(a, b)))
    graph = Graph(n, sorted(edges))
    if return_block:
        return graph, [int(v) for v in block]
    return graph


def planted_directed(
    n: int,
    s_size: int,
    t_size: int,
    p_in: float,
    p_out: float,
    seed: int,
) -> Tuple[DirectedGraph, List[int], List[int]]:
    """
    Directed background G(n, p_out) plus edges S* -> T* with probability p_in.

    S* and T* are disjoint random vertex sets of the given sizes.

    Returns:
        (graph, S*, T*)
    """
    _check_probability("p_in", p_in)
    _check_probability("p_out", p_out)
    if s_size < 1 or t_size < 1 or s_size + t_size > n:
        raise InvalidArgumentError(f"planted sides {s_size}+{t_size} must be positive and fit in n={n}")
    rng = np.random.default_rng(seed)
    chosen = rng.permutation(n)
    sources = np.sort(chosen[:s_size])
    targets = np.sort(chosen[s_size:s_size + t_size])
    edges = {(int(u), int(v)) for u, v in nx.gnp_random_graph(n, p_out, seed=seed, directed=True).edges()}
    hits = rng.random((s_size, t_size)) < p_in
    for i, j in zip(*np.nonzero(hits)):
        edges.add((int(sources[i]), int(targets[j])))
    graph = DirectedGraph(n, sorted(edges))
    return graph, [int(v) for v in sources], [int(v) for v in targets]


def unit_costs(n: int) -> List[int]:
    return [1] * n


def random_costs(n: int, low: float, high: float, seed: int, decimals: int = 2) -> List[str]:
    """Uniform costs in [low, high], rounded to ``decimals`` places and kept as decimal strings."""
    if low < 1 or high < low:
        raise InvalidArgumentError(f"cost range [{low}, {high}] must satisfy 1 <= low <= high")
    rng = np.random.default_rng(seed)
    values = np.round(rng.uniform(low, high, size=n), decimals)
    return [f"{max(value, low):.{decimals}f}" for value in values]
