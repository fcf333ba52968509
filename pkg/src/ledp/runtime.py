"""
Simulated local-edge-DP execution.

An untrusted curator (a protocol function) talks to n node agents in rounds.
Node-side code only ever receives a ``NodeView``: its own id, its own sorted
neighbor list, its own cost and a read-only bulletin board. Every value the
curator receives passes through a registered local randomizer and is recorded
in the transcript; curator-side derived values are recorded as zero-cost
post-processing entries.

Noise for node v in a collect round with key k is element v of the vector
drawn from substream ("noise", *k), so two protocols using the same keys see
the same random string.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..graph.graphs import Graph, NodeWeightedGraph
from ..privacy.accountant import PrivacyAccountant
from ..privacy.budget import NoiseSpec, PrivacyBudget
from ..privacy.samplers import RngStreams, gaussian_sample, laplace_sample, sym_geometric_sample
from ..utils.error_handler import BoundaryViolation, ProtocolError
from ..utils.logger import get_logger
from .transcript import Transcript, TranscriptEntry, same_payload

logger = get_logger(__name__)

MODES = ("local", "central")


class BulletinBoard:
    """Public append-only board of curator broadcasts."""

    def __init__(self):
        self._latest: Dict[str, Any] = {}
        self._count = 0

    def post(self, kind: str, payload: Any) -> None:
        self._latest[kind] = payload
        self._count += 1

    def latest(self, kind: str) -> Any:
        if kind not in self._latest:
            raise ProtocolError(f"nothing of kind {kind!r} has been broadcast")
        return self._latest[kind]

    def __len__(self) -> int:
        return self._count


class BoardView:
    """Read-only window on the bulletin board handed to nodes."""

    __slots__ = ("_board",)

    def __init__(self, board: BulletinBoard):
        object.__setattr__(self, "_board", board)

    def latest(self, kind: str) -> Any:
        return self._board.latest(kind)

    def __setattr__(self, name: str, value: Any) -> None:
        raise BoundaryViolation(f"nodes cannot write to the bulletin board (attribute {name!r})")


class NodeView:
    """Everything node v may see: its id, own neighbors, own cost and the public board."""

    __slots__ = ("_node", "_neighbors", "_cost", "_board")

    def __init__(self, node: int, neighbors: np.ndarray, cost: float, board: BoardView):
        object.__setattr__(self, "_node", int(node))
        own = np.array(neighbors, dtype=np.int64, copy=True)
        own.setflags(write=False)
        object.__setattr__(self, "_neighbors", own)
        object.__setattr__(self, "_cost", float(cost))
        object.__setattr__(self, "_board", board)

    @property
    def node(self) -> int:
        return self._node

    @property
    def neighbors(self) -> np.ndarray:
        return self._neighbors

    @property
    def cost(self) -> float:
        return self._cost

    @property
    def board(self) -> BoardView:
        return self._board

    def __getattr__(self, name: str) -> Any:
        raise BoundaryViolation(f"node {self._node} attempted to access {name!r} outside its view")

    def __setattr__(self, name: str, value: Any) -> None:
        raise BoundaryViolation(f"node {self._node} attempted to modify {name!r}")

    def __repr__(self) -> str:
        return f"NodeView(node={self._node}, degree={self._neighbors.size})"


class LocalRandomizer(ABC):
    """
    A node-side statistic plus the noise every node adds to it.

    ``statistic`` runs per node against its ``NodeView``. ``batch_statistic``
    is the trusted-curator evaluation used in central mode and must agree
    with ``statistic`` exactly.
    """

    name = "randomizer"

    def __init__(self, noise: NoiseSpec, sensitivity: float = 1.0, disjointness: str = "strict",
                 name: Optional[str] = None):
        if name is not None:
            self.name = name
        self.noise = noise
        self.sensitivity = sensitivity
        self.disjointness = disjointness

    @abstractmethod
    def statistic(self, view: NodeView) -> float:
        """Exact local statistic of one node."""

    def batch_statistic(self, graph: Graph, parties: np.ndarray, board: BoardView) -> np.ndarray:
        views = [NodeView(v, graph.neighbors(v), 1.0, board) for v in parties]
        return np.array([self.statistic(view) for view in views])

    def params(self) -> Dict[str, Any]:
        return {
            "noise": self.noise.kind,
            "scale": self.noise.scale,
            "sensitivity": self.sensitivity,
            "disjointness": self.disjointness,
        }


class Curator(ABC):
    """Operations a curator program may perform."""

    n: int
    costs: np.ndarray

    @abstractmethod
    def broadcast(self, kind: str, payload: Any) -> None:
        """Publish a message on the bulletin board."""

    @abstractmethod
    def collect(self, randomizer: LocalRandomizer, parties: Optional[Iterable[int]] = None,
                key: Optional[Tuple] = None) -> np.ndarray:
        """Run ``randomizer`` on every queried party; outputs in node-id order."""

    @abstractmethod
    def release(self, name: str, query: Callable[[Graph], float], noise: NoiseSpec,
                sensitivity: float = 1.0, key: Optional[Tuple] = None) -> float:
        """Trusted-curator release of one global statistic plus one noise draw."""

    @abstractmethod
    def draw_index(self, label: str, high: int) -> int:
        """Curator-local uniform draw from 0..high-1."""

    @abstractmethod
    def note(self, label: str, payload: Any) -> None:
        """Record a derived value as post-processing."""


def _parties(n: int, parties: Optional[Iterable[int]]) -> np.ndarray:
    if parties is None:
        return np.arange(n, dtype=np.int64)
    arr = np.unique(np.fromiter((int(v) for v in parties), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise ProtocolError(f"queried party outside 0..{n - 1}")
    return arr


class ProtocolRuntime(Curator):
    """Live runtime holding the private graph and the node agents."""

    def __init__(
        self,
        graph: Union[Graph, NodeWeightedGraph],
        streams: RngStreams,
        mode: str = "local",
        keep_transcript: bool = True,
        accountant: Optional[PrivacyAccountant] = None,
    ):
        if mode not in MODES:
            raise ProtocolError(f"unknown execution mode {mode!r}; expected one of {MODES}")
        if isinstance(graph, NodeWeightedGraph):
            self._graph = graph.graph
            self.costs = graph.cost_array
        else:
            self._graph = graph
            self.costs = np.ones(graph.n)
        self.n = self._graph.n
        self.mode = mode
        self.streams = streams
        self.transcript = Transcript(keep=keep_transcript)
        self.accountant = accountant or PrivacyAccountant()
        self._board = BulletinBoard()
        self._board_view = BoardView(self._board)
        self._views: Optional[List[NodeView]] = None
        self._collect_index = 0
        self._draw_index = 0
        self._active = False

    def _require_active(self, operation: str) -> None:
        if not self._active:
            raise ProtocolError(f"{operation} called outside a protocol run")

    def _node_views(self) -> List[NodeView]:
        if self._views is None:
            self._views = [
                NodeView(v, self._graph.neighbors(v), self.costs[v], self._board_view)
                for v in range(self.n)
            ]
        return self._views

    def _noise(self, noise: NoiseSpec, key: Tuple) -> np.ndarray:
        rng = self.streams.generator("noise", *key)
        if noise.kind == "gaussian":
            return gaussian_sample(rng, noise.scale, size=self.n)
        if noise.kind == "geometric":
            gamma = math.inf if noise.is_noiseless else math.exp(noise.scale)
            return sym_geometric_sample(rng, gamma, size=self.n)
        return laplace_sample(rng, noise.scale, size=self.n)

    def broadcast(self, kind: str, payload: Any) -> None:
        self._require_active("broadcast")
        if isinstance(payload, np.ndarray):
            payload = payload.copy()
            payload.setflags(write=False)
        self._board.post(kind, payload)
        self.transcript.append(TranscriptEntry(kind="post", label=f"broadcast:{kind}", payload=payload))

    def collect(self, randomizer: LocalRandomizer, parties: Optional[Iterable[int]] = None,
                key: Optional[Tuple] = None) -> np.ndarray:
        self._require_active("collect")
        queried = _parties(self.n, parties)
        index = self._collect_index
        self._collect_index += 1
        key = tuple(key) if key is not None else ("collect", index)
        noise = self._noise(randomizer.noise, key)
        if queried.size == 0:
            outputs = noise[:0]
        elif self.mode == "local":
            views = self._node_views()
            outputs = np.array([randomizer.statistic(views[v]) for v in queried]) + noise[queried]
        else:
            values = np.asarray(randomizer.batch_statistic(self._graph, queried, self._board_view))
            outputs = values + noise[queried]
        # declared cost is charged per invocation, even for an empty party set
        self.accountant.record(
            randomizer.name,
            randomizer.noise,
            sensitivity=randomizer.sensitivity,
            disjointness=randomizer.disjointness,
        )
        self.transcript.append(TranscriptEntry(
            kind="collect",
            label=randomizer.name,
            parties=queried,
            params=randomizer.params(),
            outputs=outputs,
        ))
        return outputs

    def release(self, name: str, query: Callable[[Graph], float], noise: NoiseSpec,
                sensitivity: float = 1.0, key: Optional[Tuple] = None) -> float:
        self._require_active("release")
        if self.mode != "central":
            raise ProtocolError(f"release of {name!r} needs a trusted curator (central mode)")
        index = self._collect_index
        self._collect_index += 1
        key = tuple(key) if key is not None else ("release", index)
        value = float(query(self._graph)) + float(self._noise(noise, key)[0])
        self.accountant.record(name, noise, sensitivity=sensitivity)
        self.transcript.append(TranscriptEntry(
            kind="release",
            label=name,
            parties=np.arange(0, dtype=np.int64),
            params={"noise": noise.kind, "scale": noise.scale, "sensitivity": sensitivity},
            outputs=np.array([value]),
        ))
        return value

    def draw_index(self, label: str, high: int) -> int:
        self._require_active("draw_index")
        if high < 1:
            raise ProtocolError(f"cannot draw from an empty range (high={high})")
        rng = self.streams.generator("curator", label, self._draw_index)
        self._draw_index += 1
        value = int(rng.integers(0, high))
        self.transcript.append(TranscriptEntry(kind="post", label=f"draw:{label}", payload=value))
        return value

    def note(self, label: str, payload: Any) -> None:
        self._require_active("note")
        self.transcript.append(TranscriptEntry(kind="post", label=f"note:{label}", payload=payload))


class ReplayRuntime(Curator):
    """Serves a recorded transcript back to a curator program and checks every step matches."""

    def __init__(self, transcript: Transcript, n: int, costs: Optional[Sequence[float]] = None):
        self.n = n
        self.costs = np.ones(n) if costs is None else np.asarray(costs, dtype=np.float64)
        self._entries: Iterator[TranscriptEntry] = iter(transcript.entries)
        self._position = 0

    def _next(self, kind: str, label: str) -> TranscriptEntry:
        entry = next(self._entries, None)
        self._position += 1
        if entry is None:
            raise ProtocolError(f"replay ran past the end of the transcript expecting {label!r}")
        if entry.kind != kind or entry.label != label:
            raise ProtocolError(
                f"replay mismatch at entry {self._position}: expected {kind} {label!r}, "
                f"recorded {entry.kind} {entry.label!r}"
            )
        return entry

    def broadcast(self, kind: str, payload: Any) -> None:
        entry = self._next("post", f"broadcast:{kind}")
        if not same_payload(entry.payload, payload):
            raise ProtocolError(f"replay mismatch at entry {self._position}: broadcast {kind!r} differs")

    def collect(self, randomizer: LocalRandomizer, parties: Optional[Iterable[int]] = None,
                key: Optional[Tuple] = None) -> np.ndarray:
        entry = self._next("collect", randomizer.name)
        if not np.array_equal(entry.parties, _parties(self.n, parties)):
            raise ProtocolError(f"replay mismatch at entry {self._position}: queried parties differ")
        return np.asarray(entry.outputs)

    def release(self, name: str, query: Callable[[Graph], float], noise: NoiseSpec,
                sensitivity: float = 1.0, key: Optional[Tuple] = None) -> float:
        return float(np.asarray(self._next("release", name).outputs)[0])

    def draw_index(self, label: str, high: int) -> int:
        return int(self._next("post", f"draw:{label}").payload)

    def note(self, label: str, payload: Any) -> None:
        entry = self._next("post", f"note:{label}")
        if not same_payload(entry.payload, payload):
            raise ProtocolError(f"replay mismatch at entry {self._position}: derived value {label!r} differs")

    def finish(self) -> None:
        if next(self._entries, None) is not None:
            raise ProtocolError("replay finished with unread transcript entries")


Protocol = Callable[[Curator], Any]


@dataclass
class ProtocolRun:
    output: Any
    transcript: Transcript
    accountant: PrivacyAccountant

    @property
    def budget(self) -> PrivacyBudget:
        return self.accountant.total

    @property
    def rounds(self) -> int:
        return self.transcript.collect_rounds


def run_protocol(
    graph: Union[Graph, NodeWeightedGraph],
    protocol: Protocol,
    seed: Union[int, RngStreams],
    mode: str = "local",
    keep_transcript: bool = True,
) -> ProtocolRun:
    """
    Execute a curator program against the node agents of ``graph``.

    Args:
        graph: The private graph (held by the runtime, never by the curator)
        protocol: Curator program taking a ``Curator``
        seed: Root seed or prepared substreams
        mode: "local" (per-node callbacks) or "central" (vectorized, trusted curator)
        keep_transcript: Keep every entry (otherwise only round counts)

    Returns:
        ProtocolRun with the output, transcript and ledger
    """
    streams = seed if isinstance(seed, RngStreams) else RngStreams(seed)
    runtime = ProtocolRuntime(graph, streams, mode=mode, keep_transcript=keep_transcript)
    runtime._active = True
    try:
        output = protocol(runtime)
    finally:
        runtime._active = False
    logger.debug(
        f"Protocol finished: {runtime.transcript.collect_rounds} collect rounds, "
        f"zCDP total {runtime.accountant.total.zcdp_budget:.6g}"
    )
    return ProtocolRun(output=output, transcript=runtime.transcript, accountant=runtime.accountant)


def replay(transcript: Transcript, protocol: Protocol, n: int, costs: Optional[Sequence[float]] = None) -> Any:
    """Re-run a curator program over recorded outputs; raises ProtocolError on any divergence."""
    runtime = ReplayRuntime(transcript, n, costs)
    output = protocol(runtime)
    runtime.finish()
    return output
