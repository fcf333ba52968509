"""
Local randomizers used by the protocols.

Each statistic reads only the node's own view plus public broadcasts.
"""
from typing import Optional

import numpy as np

from ..graph.graphs import Graph
from ..privacy.budget import NoiseSpec
from .runtime import BoardView, LocalRandomizer, NodeView


class PeelCountRandomizer(LocalRandomizer):
    """q(sigma)_v: neighbors of v ranked before v in the broadcast ordering."""

    name = "peel_count"

    def __init__(self, noise: NoiseSpec, topic: str = "ordering", name: Optional[str] = None):
        super().__init__(noise, sensitivity=1.0, disjointness="strict", name=name)
        self.topic = topic

    def statistic(self, view: NodeView) -> float:
        position = view.board.latest(self.topic)
        return int(np.count_nonzero(position[view.neighbors] < position[view.node]))

    def batch_statistic(self, graph: Graph, parties: np.ndarray, board: BoardView) -> np.ndarray:
        position = board.latest(self.topic)
        e = graph.edges
        later = np.where(position[e[:, 0]] < position[e[:, 1]], e[:, 1], e[:, 0])
        return np.bincount(later, minlength=graph.n)[parties]


class MaskedDegreeRandomizer(LocalRandomizer):
    """
    Number of v's neighbors inside a broadcast vertex mask.

    Used for remaining degrees in parallel peeling and for cross-degrees
    deg_T(v) on the bipartite lift. Every edge touches two parties.
    """

    name = "masked_degree"

    def __init__(self, noise: NoiseSpec, topic: str, name: Optional[str] = None):
        super().__init__(noise, sensitivity=1.0, disjointness="two-cover", name=name)
        self.topic = topic

    def statistic(self, view: NodeView) -> float:
        mask = view.board.latest(self.topic)
        return int(np.count_nonzero(mask[view.neighbors]))

    def batch_statistic(self, graph: Graph, parties: np.ndarray, board: BoardView) -> np.ndarray:
        mask = board.latest(self.topic)
        e = graph.edges
        counts = np.bincount(e[mask[e[:, 1]], 0], minlength=graph.n)
        counts += np.bincount(e[mask[e[:, 0]], 1], minlength=graph.n)
        return counts[parties]
