"""
Non-private ground truth for densest subgraph.

Exact brute force (undirected, node-weighted, directed), an exact min-cut
oracle for undirected graphs, and greedy peeling baselines. All densities
are exact ``Fraction`` values; directed optima are reported through their
exact square.
"""
import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Tuple, Union

import networkx as nx

from .. import config
from ..graph.density import density, weighted_density
from ..graph.graphs import DirectedGraph, Graph, NodeWeightedGraph
from ..utils.error_handler import InvalidArgumentError, OracleLimitError
from ..utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class OracleResult:
    vertices: frozenset
    density: Fraction
    method: str


@dataclass(frozen=True)
class DirectedOracleResult:
    sources: frozenset
    targets: frozenset
    density_squared: Fraction
    method: str

    @property
    def density(self) -> float:
        return math.sqrt(self.density_squared)


def _members(mask: int, n: int) -> Tuple[int, ...]:
    return tuple(i for i in range(n) if mask >> i & 1)


def _adjacency_bits(g: Graph) -> List[int]:
    bits = [0] * g.n
    for u, v in g.edges.tolist():
        bits[u] |= 1 << v
        bits[v] |= 1 << u
    return bits


def _integer_costs(costs) -> Tuple[List[int], int]:
    scale = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in costs), 1)
    return [int(c * scale) for c in costs], scale


def _check_limit(n: int, limit: int, what: str) -> None:
    if n == 0:
        raise InvalidArgumentError("graph has no vertices")
    if n > limit:
        raise OracleLimitError(
            f"{what} handles at most {limit} vertices, got n={n}; supply the optimum density instead"
        )


def _bruteforce_sets(adj: List[int], costs: List[int]) -> Tuple[int, int, int]:
    """Gray-code scan of all nonempty subsets maximizing |E(S)| / cost(S)."""
    n = len(adj)
    members = edges_in = weight = 0
    best_mask, best_edges, best_weight = 0, -1, 1
    for i in range(1, 1 << n):
        bit = (i & -i).bit_length() - 1
        flip = 1 << bit
        if members & flip:
            members ^= flip
            edges_in -= bin(adj[bit] & members).count("1")
            weight -= costs[bit]
        else:
            edges_in += bin(adj[bit] & members).count("1")
            members |= flip
            weight += costs[bit]
        lhs, rhs = edges_in * best_weight, best_edges * weight
        if lhs > rhs or (lhs == rhs and _members(members, n) < _members(best_mask, n)):
            best_mask, best_edges, best_weight = members, edges_in, weight
    return best_mask, best_edges, best_weight


def exact_dsg_bruteforce(
    g: Union[Graph, NodeWeightedGraph, DirectedGraph],
    limit: Optional[int] = None,
) -> Union[OracleResult, DirectedOracleResult]:
    """
    Exact densest subgraph by enumeration; ties go to the lexicographically
    smallest set (for directed graphs, smallest S then smallest T).

    Raises:
        OracleLimitError: n above the enumeration limit
    """
    if isinstance(g, DirectedGraph):
        return _directed_bruteforce(g, config.DIRECTED_BRUTEFORCE_LIMIT if limit is None else limit)
    limit = config.BRUTEFORCE_LIMIT if limit is None else limit
    if isinstance(g, NodeWeightedGraph):
        _check_limit(g.n, limit, "weighted brute force")
        costs, scale = _integer_costs(g.costs)
        mask, edges_in, weight = _bruteforce_sets(_adjacency_bits(g.graph), costs)
        return OracleResult(frozenset(_members(mask, g.n)), Fraction(edges_in * scale, weight), "bruteforce")
    _check_limit(g.n, limit, "brute force")
    mask, edges_in, size = _bruteforce_sets(_adjacency_bits(g), [1] * g.n)
    return OracleResult(frozenset(_members(mask, g.n)), Fraction(edges_in, size), "bruteforce")


def _directed_bruteforce(g: DirectedGraph, limit: int) -> DirectedOracleResult:
    _check_limit(g.n, limit, "directed brute force")
    n = g.n
    out = [0] * n
    for u, v in g.edges.tolist():
        out[u] |= 1 << v
    best: Optional[Tuple[int, int, int, int]] = None  # (e, |S||T|, S, T)
    for s_mask in range(1, 1 << n):
        s_members = _members(s_mask, n)
        for t_mask in range(1, 1 << n):
            e = sum(bin(out[u] & t_mask).count("1") for u in s_members)
            pairs = len(s_members) * bin(t_mask).count("1")
            if best is None:
                best = (e, pairs, s_mask, t_mask)
                continue
            lhs, rhs = e * e * best[1], best[0] * best[0] * pairs
            if lhs > rhs or (lhs == rhs and (s_members, _members(t_mask, n)) < (
                    _members(best[2], n), _members(best[3], n))):
                best = (e, pairs, s_mask, t_mask)
    e, pairs, s_mask, t_mask = best
    return DirectedOracleResult(
        sources=frozenset(_members(s_mask, n)),
        targets=frozenset(_members(t_mask, n)),
        density_squared=Fraction(e * e, pairs),
        method="bruteforce",
    )


def _max_excess(g: Graph, a: int, b: int) -> Tuple[frozenset, int]:
    """
    max over S of b|E(S)| - a|S| through one minimum cut.

    Capacities s->v: m b, v->t: m b + 2a - d_v b, u<->v: b. A cut with
    source side S costs n m b + 2(a|S| - b|E(S)|).
    """
    m, n = g.m, g.n
    degrees = g.degrees().tolist()
    network = nx.DiGraph()
    for v in range(n):
        network.add_edge("s", v, capacity=m * b)
        network.add_edge(v, "t", capacity=m * b + 2 * a - degrees[v] * b)
    for u, v in g.edges.tolist():
        network.add_edge(u, v, capacity=b)
        network.add_edge(v, u, capacity=b)
    cut_value, (source_side, _) = nx.minimum_cut(network, "s", "t")
    chosen = frozenset(v for v in source_side if v != "s")
    return chosen, (n * m * b - int(cut_value)) // 2


def exact_dsg_flow(g: Graph, limit: Optional[int] = None) -> OracleResult:
    """
    Exact densest subgraph through parametric min cuts.

    Starting from rho(V), each cut either certifies the current guess as
    optimal or returns a strictly denser set, whose exact density becomes the
    next guess.
    """
    limit = config.FLOW_LIMIT if limit is None else limit
    _check_limit(g.n, limit, "flow oracle")
    if g.m == 0:
        return OracleResult(frozenset({0}), Fraction(0), "flow")
    best = frozenset(range(g.n))
    guess = Fraction(g.m, g.n)
    iterations = 0
    while True:
        iterations += 1
        candidate, excess = _max_excess(g, guess.numerator, guess.denominator)
        if excess <= 0 or not candidate:
            break
        best, guess = candidate, density(g, candidate)
    logger.debug(f"flow oracle: n={g.n}, m={g.m}, lambda*={guess} after {iterations} cuts")
    return OracleResult(best, guess, "flow")


def charikar_greedy(g: Graph) -> OracleResult:
    """Repeatedly remove a minimum-degree vertex; return the densest set seen (a 2-approximation)."""
    if g.n == 0:
        raise InvalidArgumentError("graph has no vertices")
    degree = g.degrees().tolist()
    heap = [(d, v) for v, d in enumerate(degree)]
    heapq.heapify(heap)
    alive = [True] * g.n
    edges_left, size = g.m, g.n
    best_value, best_removed = Fraction(edges_left, size), 0
    removal: List[int] = []
    while size > 1:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != degree[v]:
            continue
        alive[v] = False
        removal.append(v)
        edges_left -= d
        size -= 1
        for u in g.neighbors(v).tolist():
            if alive[u]:
                degree[u] -= 1
                heapq.heappush(heap, (degree[u], u))
        value = Fraction(edges_left, size)
        if value > best_value:
            best_value, best_removed = value, len(removal)
    removed = set(removal[:best_removed])
    return OracleResult(frozenset(v for v in range(g.n) if v not in removed), best_value, "greedy")


def weighted_greedy(g: NodeWeightedGraph) -> OracleResult:
    """Peel the vertex with the smallest degree-to-cost ratio; return the densest set seen."""
    if g.n == 0:
        raise InvalidArgumentError("graph has no vertices")
    graph = g.graph
    degree = graph.degrees().tolist()
    heap = [(Fraction(d) / g.costs[v], v) for v, d in enumerate(degree)]
    heapq.heapify(heap)
    alive = [True] * g.n
    remaining = set(range(g.n))
    best_set = frozenset(remaining)
    best_value = weighted_density(g, best_set)
    while len(remaining) > 1:
        ratio, v = heapq.heappop(heap)
        if not alive[v] or ratio != Fraction(degree[v]) / g.costs[v]:
            continue
        alive[v] = False
        remaining.discard(v)
        for u in graph.neighbors(v).tolist():
            if alive[u]:
                degree[u] -= 1
                heapq.heappush(heap, (Fraction(degree[u]) / g.costs[u], u))
        value = weighted_density(g, remaining)
        if value > best_value:
            best_set, best_value = frozenset(remaining), value
    return OracleResult(best_set, best_value, "greedy")


def exact_dsg(g: Union[Graph, NodeWeightedGraph, DirectedGraph]) -> Union[OracleResult, DirectedOracleResult]:
    """Best available exact oracle: min cuts for undirected graphs, enumeration otherwise."""
    if isinstance(g, Graph):
        return exact_dsg_flow(g)
    return exact_dsg_bruteforce(g)
