import itertools
import math
import os
import sys
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.graph.density import (
    best_noisy_prefix,
    best_prefix,
    cross_edges,
    density,
    directed_density,
    directed_density_squared,
    induced_edges,
    peel_counts,
    weighted_density,
)
from src.graph.edge_list import format_edge_list, parse_edge_list, read_edge_list, write_edge_list
from src.graph.generators import directed_gnp, gnp, planted_dense, planted_directed, random_costs, unit_costs
from src.graph.graphs import DirectedGraph, Graph, NodeWeightedGraph, Ordering, lift_costs
from src.utils.error_handler import EmptySubsetError, GraphFormatError, InvalidArgumentError

TWO_TRIANGLES = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]


@pytest.fixture
def k4():
    return Graph(4, itertools.combinations(range(4), 2))


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def bridge():
    return Graph(6, TWO_TRIANGLES)


def test_density_examples(k4, triangle, bridge):
    assert density(k4, range(4)) == Fraction(3, 2)
    assert density(triangle, {0, 1}) == Fraction(1, 2)
    assert density(bridge, range(6)) == Fraction(7, 6)


def test_density_empty_subset_raises(triangle):
    with pytest.raises(EmptySubsetError, match="empty subset has undefined density"):
        density(triangle, [])


def test_weighted_density_examples(triangle):
    assert weighted_density(NodeWeightedGraph(triangle, [2, 2, 2]), range(3)) == Fraction(1, 2)
    assert weighted_density(NodeWeightedGraph.unit(triangle), range(3)) == density(triangle, range(3))
    path = Graph(3, [(0, 1), (1, 2)])
    assert weighted_density(NodeWeightedGraph(path, [1, 2, 1]), {0, 1}) == Fraction(1, 3)


def test_unit_weights_match_unweighted_density():
    rng = np.random.default_rng(3)
    for trial in range(200):
        n = int(rng.integers(1, 10))
        g = gnp(n, 0.5, seed=trial)
        subset = [v for v in range(n) if rng.random() < 0.5] or [0]
        assert weighted_density(NodeWeightedGraph.unit(g), subset) == density(g, subset)


def test_directed_density_examples():
    g = DirectedGraph(3, [(0, 1), (0, 2)])
    assert directed_density(g, {0}, {1, 2}) == pytest.approx(math.sqrt(2))
    assert directed_density_squared(g, {0}, {1, 2}) == 2
    edge = DirectedGraph(2, [(0, 1)])
    assert directed_density(edge, {0}, {1}) == 1.0
    assert directed_density(edge, {1}, {0}) == 0.0
    assert cross_edges(g, {0}, {1}) == 1
    with pytest.raises(EmptySubsetError):
        directed_density(g, set(), {1})


def test_peel_counts_examples(triangle):
    path = Graph(3, [(0, 1), (1, 2)])
    assert peel_counts(path, Ordering([0, 1, 2])).tolist() == [0, 1, 1]
    star = Graph(3, [(0, 2), (1, 2)])
    assert peel_counts(star, Ordering([0, 1, 2])).tolist() == [0, 0, 2]
    for perm in itertools.permutations(range(3)):
        assert peel_counts(triangle, Ordering(perm)).sum() == 3


def test_peel_counts_prefix_sums_reproduce_induced_edges():
    for seed in range(5):
        g = gnp(6, 0.5, seed=seed)
        for perm in itertools.permutations(range(6)):
            sigma = Ordering(perm)
            cumulative = np.cumsum(peel_counts(g, sigma)[sigma.perm])
            assert cumulative[-1] == g.m
            for length in (1, 3, 5):
                assert cumulative[length - 1] == induced_edges(g, sigma.prefix(length))


def test_peel_counts_one_edge_sensitivity():
    rng = np.random.default_rng(11)
    for seed in range(10):
        n = int(rng.integers(2, 9))
        g = gnp(n, 0.4, seed=seed)
        sigma = Ordering(rng.permutation(n))
        base = peel_counts(g, sigma)
        for u, v in itertools.combinations(range(n), 2):
            diff = np.abs(peel_counts(g.toggle_edge(u, v), sigma) - base)
            assert diff.sum() == 1
            assert np.count_nonzero(diff) == 1


def test_peel_counts_rejects_mismatched_ordering(triangle):
    with pytest.raises(InvalidArgumentError):
        peel_counts(triangle, Ordering([0, 1]))


def test_best_prefix_examples(bridge):
    chosen, value = best_prefix(Graph(2, [(0, 1)]), Ordering([0, 1]))
    assert chosen == frozenset({0, 1}) and value == Fraction(1, 2)
    chosen, value = best_prefix(Graph(3), Ordering([2, 0, 1]))
    assert chosen == frozenset({2}) and value == 0
    _, value = best_prefix(bridge, Ordering([0, 1, 2, 3, 4, 5]))
    assert value == Fraction(7, 6)


def test_best_noisy_prefix_prefers_shorter_on_ties():
    length, value = best_noisy_prefix(np.array([0.0, 1.0, 1.0]), np.array([1.0, 2.0, 4.0]))
    assert (length, value) == (2, 0.5)
    with pytest.raises(EmptySubsetError):
        best_noisy_prefix(np.array([]), np.array([]))


def test_graph_rejects_non_simple_input():
    with pytest.raises(GraphFormatError, match="self-loop"):
        Graph(3, [(1, 1)])
    with pytest.raises(GraphFormatError, match="duplicate"):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphFormatError, match="duplicate"):
        DirectedGraph(3, [(0, 1), (0, 1)])
    with pytest.raises(GraphFormatError):
        Graph(2, [(0, 2)])


def test_graph_adjacency_is_symmetric_and_sorted():
    g = gnp(12, 0.3, seed=4)
    for v in range(g.n):
        nbrs = g.neighbors(v).tolist()
        assert nbrs == sorted(nbrs)
        assert all(v in g.neighbors(u).tolist() for u in nbrs)
    assert g.degrees().sum() == 2 * g.m


def test_node_weighted_graph_checks_costs(triangle):
    with pytest.raises(GraphFormatError, match="at least 1"):
        NodeWeightedGraph(triangle, [1, 0.5, 1])
    with pytest.raises(GraphFormatError):
        NodeWeightedGraph(triangle, [1, 1])
    weighted = NodeWeightedGraph(triangle, ["1.5", 3, 2])
    assert weighted.c_max == 3
    assert weighted.cost({0, 2}) == Fraction(7, 2)


def test_directed_graph_queries():
    g = DirectedGraph(4, [(0, 1), (0, 2), (3, 0)])
    assert g.out_neighbors(0).tolist() == [1, 2]
    assert g.in_neighbors(0).tolist() == [3]
    assert g.cross_degree(0, [2, 3]) == 1


def test_ordering_validation_and_ties():
    with pytest.raises(InvalidArgumentError):
        Ordering([0, 0, 1])
    sigma = Ordering.by_scores_desc(np.array([1.0, 2.0, 1.0]))
    assert sigma.perm.tolist() == [1, 0, 2]
    assert sigma.position[sigma.perm].tolist() == [0, 1, 2]


def test_lift_costs_smaller_side_is_one():
    assert lift_costs(2) == (Fraction(1, 4), 1, 4)
    assert lift_costs(Fraction(1, 2)) == (Fraction(1, 4), 4, 1)
    with pytest.raises(InvalidArgumentError):
        lift_costs(0)


def test_generators_extremes_and_determinism():
    assert gnp(5, 0, seed=1).m == 0
    assert gnp(5, 1, seed=1).m == 10
    assert gnp(20, 0.3, seed=9) == gnp(20, 0.3, seed=9)
    assert directed_gnp(6, 1, seed=0).m == 30
    with pytest.raises(InvalidArgumentError):
        gnp(5, 1.5, seed=0)
    with pytest.raises(InvalidArgumentError):
        planted_dense(5, 6, 0.5, 0.1, seed=0)


def test_planted_generators_embed_their_block():
    g, block = planted_dense(40, 10, 1.0, 0.0, seed=2, return_block=True)
    assert len(block) == 10
    assert induced_edges(g, block) == 45 and g.m == 45
    dg, sources, targets = planted_directed(20, 3, 4, 1.0, 0.0, seed=5)
    assert not set(sources) & set(targets)
    assert cross_edges(dg, sources, targets) == 12


def test_cost_helpers():
    assert unit_costs(3) == [1, 1, 1]
    costs = random_costs(50, 1.0, 4.0, seed=3)
    assert all(1 <= Fraction(c) <= 4 for c in costs)
    with pytest.raises(InvalidArgumentError):
        random_costs(3, 0.5, 2.0, seed=0)


def test_edge_list_round_trip_is_byte_stable(tmp_path):
    text = "# toy\nn=4\n0 1\n2 1\nw 3 2.5\n"
    parsed = parse_edge_list(text, kind="weighted")
    assert parsed.graph.costs[3] == Fraction(5, 2)
    first = format_edge_list(parsed.graph)
    path = write_edge_list(parsed.graph, tmp_path / "g.el")
    assert format_edge_list(read_edge_list(path, kind="weighted").graph) == first


def test_edge_list_labels_side_table():
    parsed = parse_edge_list("bob carol\nalice bob\n")
    assert parsed.labels == ["alice", "bob", "carol"]
    assert parsed.graph.m == 2
    assert parsed.label(0) == "alice"
    again = parse_edge_list(format_edge_list(parsed.graph, parsed.labels))
    assert again.labels == parsed.labels and again.graph == parsed.graph


def test_edge_list_errors(tmp_path):
    with pytest.raises(GraphFormatError):
        parse_edge_list("0 1 2 3\n")
    with pytest.raises(GraphFormatError):
        parse_edge_list("0 0\n")
    with pytest.raises(GraphFormatError):
        parse_edge_list("w 0 2\n0 1\n", kind="undirected")
    with pytest.raises(GraphFormatError):
        parse_edge_list("n=2\n0 5\n")
    with pytest.raises(GraphFormatError):
        read_edge_list(tmp_path / "missing.el")
    with pytest.raises(InvalidArgumentError):
        parse_edge_list("0 1\n", kind="hyper")


def test_directed_edge_list_keeps_orientation():
    g = parse_edge_list("0 1\n1 0\n", kind="directed").graph
    assert isinstance(g, DirectedGraph) and g.m == 2
