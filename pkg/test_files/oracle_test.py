import itertools
import os
import sys
from fractions import Fraction
from unittest.mock import Mock

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.graph.density import density, weighted_density
from src.graph.generators import directed_gnp, gnp, planted_dense, random_costs
from src.graph.graphs import DirectedGraph, Graph, NodeWeightedGraph
from src.oracle.baselines import (
    charikar_greedy,
    exact_dsg,
    exact_dsg_bruteforce,
    exact_dsg_flow,
    weighted_greedy,
)
from src.oracle.cache import OracleCache
from src.utils.error_handler import InvalidArgumentError, OracleLimitError

TWO_TRIANGLES = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]


def test_bruteforce_examples():
    k4 = exact_dsg_bruteforce(Graph(4, itertools.combinations(range(4), 2)))
    assert k4.density == Fraction(3, 2) and k4.vertices == frozenset(range(4))
    assert exact_dsg_bruteforce(Graph(6, TWO_TRIANGLES)).density == Fraction(7, 6)
    k5_minus = Graph(5, [e for e in itertools.combinations(range(5), 2) if e != (0, 1)])
    result = exact_dsg_bruteforce(k5_minus)
    assert result.density == Fraction(9, 5) and result.vertices == frozenset(range(5))


def test_bruteforce_tie_goes_to_smallest_set():
    two_edges = Graph(4, [(0, 1), (2, 3)])
    assert exact_dsg_bruteforce(two_edges).vertices == frozenset({0, 1})


def test_flow_agrees_with_bruteforce():
    rng = np.random.default_rng(1)
    for seed in range(200):
        g = gnp(int(rng.integers(1, 13)), float(rng.uniform(0.1, 0.9)), seed=seed)
        flow = exact_dsg_flow(g)
        assert flow.density == exact_dsg_bruteforce(g).density
        assert density(g, flow.vertices) == flow.density


def test_flow_empty_graph_and_planted_block():
    assert exact_dsg_flow(Graph(5)).density == 0
    g, block = planted_dense(200, 30, 0.9, 0.01, seed=3, return_block=True)
    assert exact_dsg_flow(g).density >= density(g, block)


def test_greedy_examples_and_two_approximation():
    assert charikar_greedy(Graph(3, [(0, 1), (1, 2), (0, 2)])).density == 1
    cycle = charikar_greedy(Graph(6, [(i, (i + 1) % 6) for i in range(6)]))
    assert cycle.density == 1 and cycle.vertices == frozenset(range(6))
    rng = np.random.default_rng(4)
    for seed in range(100):
        g = gnp(int(rng.integers(2, 9)), float(rng.uniform(0.2, 0.9)), seed=seed)
        lambda_star = exact_dsg_bruteforce(g).density
        greedy = charikar_greedy(g)
        assert lambda_star / 2 <= greedy.density <= lambda_star
        assert density(g, greedy.vertices) == greedy.density


def test_weighted_oracles():
    triangle = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert exact_dsg_bruteforce(NodeWeightedGraph(triangle, [1, 1, 2])).density == Fraction(3, 4)
    for seed in range(50):
        base = gnp(6, 0.6, seed=seed)
        g = NodeWeightedGraph(base, random_costs(6, 1.0, 3.0, seed=seed))
        exact = exact_dsg_bruteforce(g)
        best = max(weighted_density(g, s) for r in range(1, 7) for s in itertools.combinations(range(6), r))
        assert exact.density == best
        assert exact.density / 2 <= weighted_greedy(g).density <= exact.density


def test_directed_bruteforce():
    result = exact_dsg_bruteforce(DirectedGraph(3, [(0, 1), (0, 2)]))
    assert result.density_squared == 2
    assert result.density == pytest.approx(2 ** 0.5)
    assert (result.sources, result.targets) == (frozenset({0}), frozenset({1, 2}))
    with pytest.raises(OracleLimitError):
        exact_dsg_bruteforce(directed_gnp(6, 0.5, seed=0))


def test_limits_and_dispatch():
    with pytest.raises(OracleLimitError, match="supply the optimum"):
        exact_dsg_bruteforce(gnp(8, 0.5, seed=0), limit=6)
    with pytest.raises(OracleLimitError):
        exact_dsg_flow(gnp(8, 0.5, seed=0), limit=6)
    with pytest.raises(InvalidArgumentError):
        charikar_greedy(Graph(0))
    assert exact_dsg(gnp(8, 0.5, seed=0)).method == "flow"
    assert exact_dsg(DirectedGraph(2, [(0, 1)])).method == "bruteforce"


def test_oracle_cache_round_trip(tmp_path):
    path = tmp_path / "oracle.json"
    g = Graph(6, TWO_TRIANGLES)
    cache = OracleCache(path)
    compute = Mock(side_effect=exact_dsg_flow)
    first = cache.lookup_or_compute(g, compute)
    second = OracleCache(path).lookup_or_compute(g, compute)
    assert compute.call_count == 1
    assert second.density == first.density == Fraction(7, 6)
    assert second.vertices == first.vertices

    dg = DirectedGraph(3, [(0, 1), (0, 2)])
    cache.put(dg, exact_dsg(dg))
    restored = OracleCache(path).get(dg)
    assert restored.density_squared == 2 and restored.targets == frozenset({1, 2})


def test_oracle_cache_survives_a_corrupt_file(tmp_path):
    path = tmp_path / "oracle.json"
    path.write_text("{not json")
    assert OracleCache(path).get(Graph(2, [(0, 1)])) is None
