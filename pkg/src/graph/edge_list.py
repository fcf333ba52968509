"""
Edge-list text format.

One ``u v`` pair per line, whitespace separated, ``#`` comments, an optional
``n=<int>`` header, and ``w v c_v`` cost lines for node-weighted graphs.
Directed files use the same layout with (tail head) semantics.
"""
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..utils.error_handler import GraphFormatError, InvalidArgumentError
from ..utils.logger import get_logger
from .graphs import DirectedGraph, Graph, NodeWeightedGraph, to_cost

logger = get_logger(__name__)

KINDS = ("undirected", "weighted", "directed")
AnyGraph = Union[Graph, NodeWeightedGraph, DirectedGraph]


@dataclass
class EdgeList:
    """A parsed edge list with its vertex label side table (None when ids are dense integers)."""

    graph: AnyGraph
    labels: Optional[List[str]] = None

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)


def _format_cost(cost: Fraction) -> str:
    if cost.denominator == 1:
        return str(cost.numerator)
    return repr(float(cost))


def parse_edge_list(text: str, kind: str = "undirected", source: str = "<text>") -> EdgeList:
    """
    Parse edge-list text.

    Args:
        text: File contents
        kind: One of "undirected", "weighted", "directed"
        source: Name used in error messages

    Returns:
        EdgeList with the constructed graph
    """
    if kind not in KINDS:
        raise InvalidArgumentError(f"unknown graph kind {kind!r}; expected one of {KINDS}")
    header_n: Optional[int] = None
    raw_edges: List[Tuple[str, str]] = []
    raw_costs: List[Tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n="):
            try:
                header_n = int(line[2:])
            except ValueError:
                raise GraphFormatError(f"{source}:{lineno}: bad header {line!r}")
            continue
        tokens = line.split()
        if len(tokens) == 3 and tokens[0] == "w":
            if kind != "weighted":
                raise GraphFormatError(f"{source}:{lineno}: cost line in a {kind} edge list")
            raw_costs.append((tokens[1], tokens[2]))
        elif len(tokens) == 2:
            raw_edges.append((tokens[0], tokens[1]))
        else:
            raise GraphFormatError(f"{source}:{lineno}: expected 'u v', got {raw.strip()!r}")

    tokens_seen = [t for pair in raw_edges for t in pair] + [v for v, _ in raw_costs]
    labels: Optional[List[str]] = None
    if all(t.isdigit() for t in tokens_seen):
        largest = max((int(t) for t in tokens_seen), default=-1)
        n = header_n if header_n is not None else largest + 1
        if largest >= n:
            raise GraphFormatError(f"{source}: vertex {largest} outside header n={n}")
        index: Dict[str, int] = {t: int(t) for t in tokens_seen}
    else:
        # sorted label order keeps write -> read -> write byte-stable
        labels = sorted(set(tokens_seen))
        index = {t: i for i, t in enumerate(labels)}
        n = len(labels)
        if header_n is not None:
            if header_n < n:
                raise GraphFormatError(f"{source}: {n} labels exceed header n={header_n}")
            labels.extend(str(v) for v in range(n, header_n))
            n = header_n

    edges = [(index[u], index[v]) for u, v in raw_edges]
    try:
        if kind == "directed":
            graph: AnyGraph = DirectedGraph.from_edges(n, edges)
        else:
            graph = Graph.from_edges(n, edges)
            if kind == "weighted":
                costs: List[Union[int, Fraction]] = [1] * n
                for v, c in raw_costs:
                    costs[index[v]] = to_cost(c)
                graph = NodeWeightedGraph(graph, costs)
    except ValueError as e:
        raise GraphFormatError(f"{source}: {e}") from e
    logger.debug(f"Parsed {kind} edge list from {source}: n={n}, m={len(edges)}")
    return EdgeList(graph=graph, labels=labels)


def read_edge_list(path: Union[str, Path], kind: str = "undirected") -> EdgeList:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise GraphFormatError(f"cannot read {path}: {e}")
    return parse_edge_list(text, kind=kind, source=str(path))


def format_edge_list(graph: AnyGraph, labels: Optional[Sequence[str]] = None) -> str:
    """Canonical text: header, edges in sorted id order, then one cost line per vertex."""
    def name(v: int) -> str:
        return labels[v] if labels is not None else str(v)

    base = graph.graph if isinstance(graph, NodeWeightedGraph) else graph
    lines = [f"n={graph.n}"]
    lines.extend(f"{name(int(u))} {name(int(v))}" for u, v in base.edges)
    if isinstance(graph, NodeWeightedGraph):
        lines.extend(f"w {name(v)} {_format_cost(c)}" for v, c in enumerate(graph.costs))
    return "\n".join(lines) + "\n"


def write_edge_list(graph: AnyGraph, path: Union[str, Path], labels: Optional[Sequence[str]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_edge_list(graph, labels), encoding="utf-8")
    logger.info(f"Wrote {type(graph).__name__} with n={graph.n} to {path}")
    return path
