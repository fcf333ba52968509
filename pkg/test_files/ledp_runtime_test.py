import json
import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.graph.density import peel_counts
from src.graph.generators import gnp
from src.graph.graphs import Graph, Ordering
from src.ledp.randomizers import MaskedDegreeRandomizer, PeelCountRandomizer
from src.ledp.runtime import LocalRandomizer, ProtocolRuntime, replay, run_protocol
from src.ledp.transcript import Transcript
from src.privacy.budget import NoiseSpec
from src.privacy.samplers import RngStreams
from src.utils.error_handler import BoundaryViolation, ProtocolError


class NoisyDegree(LocalRandomizer):
    name = "noisy_degree"

    def __init__(self, eps: float = 1.0):
        super().__init__(NoiseSpec.geometric(eps), sensitivity=1.0, disjointness="two-cover")

    def statistic(self, view):
        return int(view.neighbors.size)


class Snooper(LocalRandomizer):
    name = "snooper"

    def __init__(self, attack: str):
        super().__init__(NoiseSpec.gaussian(1.0))
        self.attack = attack

    def statistic(self, view):
        if self.attack == "graph":
            return view.graph.m
        if self.attack == "write":
            view.neighbors_of = {}
        if self.attack == "board":
            view.board.ordering = None
        return 0


class Leaker(LocalRandomizer):
    name = "leaker"

    def __init__(self):
        super().__init__(NoiseSpec.gaussian(0.0))
        self.seen = {}

    def statistic(self, view):
        self.seen[view.node] = view.neighbors
        return 0


@pytest.fixture
def graph():
    return gnp(12, 0.4, seed=1)


def test_degree_protocol_records_one_round(graph):
    run = run_protocol(graph, lambda cur: cur.collect(NoisyDegree(1.0)), seed=3)
    assert run.rounds == 1
    assert run.output.shape == (graph.n,)
    entry = run.transcript.collects()[0]
    assert entry.label == "noisy_degree" and entry.parties.tolist() == list(range(graph.n))
    assert run.accountant.entries[0].pure_eps == 2.0
    assert run.budget.zcdp_budget == 2.0
    assert np.all(run.output == np.rint(run.output))


def test_zero_round_protocol_is_free(graph):
    run = run_protocol(graph, lambda cur: 42, seed=0)
    assert run.output == 42
    assert len(run.transcript) == 0
    assert run.budget.zcdp_budget == 0.0


def test_same_seed_same_transcript(graph):
    def protocol(cur):
        cur.broadcast("ordering", Ordering(np.arange(cur.n)[::-1]).position)
        return cur.collect(PeelCountRandomizer(NoiseSpec.gaussian(2.0)))

    first = run_protocol(graph, protocol, seed=9).transcript.to_jsonl()
    second = run_protocol(graph, protocol, seed=9).transcript.to_jsonl()
    third = run_protocol(graph, protocol, seed=10).transcript.to_jsonl()
    assert first == second
    assert first != third


@pytest.mark.parametrize("attack", ["graph", "write", "board"])
def test_node_code_cannot_leave_its_view(graph, attack):
    with pytest.raises(BoundaryViolation):
        run_protocol(graph, lambda cur: cur.collect(Snooper(attack)), seed=0)


@pytest.mark.parametrize("mode", ["local", "central"])
def test_node_neighbors_do_not_expose_the_graph(mode):
    g = Graph(4, [(0, 1), (2, 3)])
    leaker = Leaker()
    run_protocol(g, lambda cur: cur.collect(leaker, parties=[0]), seed=0, mode=mode)
    neighbors = leaker.seen[0]
    assert neighbors.tolist() == [1]
    assert neighbors.base is None
    with pytest.raises(ValueError):
        neighbors[0] = 3


def test_collect_outside_protocol_is_rejected(graph):
    runtime = ProtocolRuntime(graph, RngStreams(0))
    with pytest.raises(ProtocolError):
        runtime.collect(NoisyDegree())
    with pytest.raises(ProtocolError):
        ProtocolRuntime(graph, RngStreams(0), mode="distributed")


def test_empty_party_set_and_sequential_collects(graph):
    def protocol(cur):
        empty = cur.collect(NoisyDegree(), parties=[])
        cur.collect(NoisyDegree(), parties=[0, 1])
        cur.collect(NoisyDegree(), parties=[2])
        return empty

    run = run_protocol(graph, protocol, seed=4)
    assert run.output.size == 0
    assert [e.parties.tolist() for e in run.transcript.collects()] == [[], [0, 1], [2]]
    assert len(run.accountant) == 3


def test_broadcast_ordering_then_noiseless_peel_counts(graph):
    sigma = Ordering(np.random.default_rng(2).permutation(graph.n))

    def protocol(cur):
        cur.broadcast("ordering", sigma.position)
        return cur.collect(PeelCountRandomizer(NoiseSpec.gaussian(0.0)))

    run = run_protocol(graph, protocol, seed=0)
    assert run.output.tolist() == peel_counts(graph, sigma).tolist()
    assert run.budget.non_private


def test_local_and_central_modes_agree_bit_for_bit(graph):
    mask = np.zeros(graph.n, dtype=bool)
    mask[::2] = True

    def protocol(cur):
        cur.broadcast("ordering", Ordering(np.arange(cur.n)).position)
        q = cur.collect(PeelCountRandomizer(NoiseSpec.gaussian(1.5)), key=("round", 0))
        cur.broadcast("survivors", mask)
        d = cur.collect(MaskedDegreeRandomizer(NoiseSpec.geometric(0.7), topic="survivors"), parties=range(5))
        return np.concatenate([q, d])

    local = run_protocol(graph, protocol, seed=21, mode="local")
    central = run_protocol(graph, protocol, seed=21, mode="central")
    assert np.array_equal(local.output, central.output)
    assert local.transcript.to_jsonl() == central.transcript.to_jsonl()


def test_noise_depends_only_on_collect_key(graph):
    def protocol(cur):
        return cur.collect(NoisyDegree(0.5), key=("shared", 1))

    def padded(cur):
        cur.collect(NoisyDegree(0.5), key=("other",))
        return cur.collect(NoisyDegree(0.5), key=("shared", 1))

    assert np.array_equal(run_protocol(graph, protocol, seed=5).output, run_protocol(graph, padded, seed=5).output)


def test_release_requires_central_mode(graph):
    def protocol(cur):
        return cur.release("edges", lambda g: g.m, NoiseSpec.gaussian(0.0))

    with pytest.raises(ProtocolError, match="central"):
        run_protocol(graph, protocol, seed=0)
    run = run_protocol(graph, protocol, seed=0, mode="central")
    assert run.output == graph.m
    assert run.transcript.collects()[0].kind == "release"


def test_broadcast_payloads_are_frozen(graph):
    def protocol(cur):
        payload = np.zeros(cur.n, dtype=bool)
        cur.broadcast("survivors", payload)
        payload[0] = True
        return cur.collect(MaskedDegreeRandomizer(NoiseSpec.gaussian(0.0), topic="survivors"))

    assert run_protocol(graph, protocol, seed=0).output.sum() == 0


def _adaptive_protocol(cur):
    degrees = cur.collect(NoisyDegree(1.0), key=("degrees",))
    order = Ordering.by_scores_desc(degrees)
    cur.broadcast("ordering", order.position)
    q = cur.collect(PeelCountRandomizer(NoiseSpec.gaussian(1.0)), key=("peel",))
    pick = cur.draw_index("pick", cur.n)
    cur.note("pick", {"vertex": pick, "value": float(q[pick])})
    return pick, float(q.sum())


def test_replay_reproduces_the_curator_output(graph):
    run = run_protocol(graph, _adaptive_protocol, seed=12)
    restored = Transcript.from_jsonl(run.transcript.to_jsonl())
    assert replay(restored, _adaptive_protocol, graph.n) == run.output


def test_replay_detects_tampering(graph, tmp_path):
    run = run_protocol(graph, _adaptive_protocol, seed=12)
    path = run.transcript.save(tmp_path / "run.jsonl")
    lines = path.read_text().splitlines()
    forged = json.dumps({"kind": "post", "label": "note:pick", "payload": {"vertex": -1, "value": 0.0}})
    tampered = Transcript.from_jsonl("\n".join(lines[:-1] + [forged]) + "\n")
    with pytest.raises(ProtocolError, match="differs"):
        replay(tampered, _adaptive_protocol, graph.n)
    truncated = Transcript.from_jsonl("\n".join(lines[:2]) + "\n")
    with pytest.raises(ProtocolError, match="past the end"):
        replay(truncated, _adaptive_protocol, graph.n)


def test_replay_rejects_leftover_entries(graph):
    run = run_protocol(graph, _adaptive_protocol, seed=12)
    doubled = Transcript.from_jsonl(run.transcript.to_jsonl() * 2)
    with pytest.raises(ProtocolError, match="unread"):
        replay(doubled, _adaptive_protocol, graph.n)


def test_transcript_without_entries_still_counts_rounds(graph):
    run = run_protocol(graph, _adaptive_protocol, seed=1, keep_transcript=False)
    assert len(run.transcript) == 0
    assert run.rounds == 2


def test_ledger_is_sum_of_declared_costs(graph):
    run = run_protocol(graph, _adaptive_protocol, seed=1)
    assert run.budget.zcdp_budget == pytest.approx(2.0 + 0.5)
    assert math.isclose(sum(e.zcdp_cost for e in run.accountant.entries), run.budget.zcdp_budget)


def test_empty_graph_protocol():
    run = run_protocol(Graph(3), lambda cur: cur.collect(NoisyDegree(1.0)).tolist(), seed=0)
    assert len(run.output) == 3
