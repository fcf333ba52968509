"""
Result records returned by the private densest-subgraph algorithms.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Optional, Union

from ..graph.density import density, directed_density, weighted_density
from ..graph.graphs import DirectedGraph, Graph, NodeWeightedGraph
from ..ledp.transcript import Transcript
from ..privacy.accountant import PrivacyAccountant
from ..privacy.budget import PrivacyBudget


@dataclass
class DensityResult:
    """
    A vertex set chosen by a private algorithm.

    ``noisy_density`` is the value the selection used. ``true_density`` stays
    ``None`` until the harness evaluates it after the protocol has ended.
    """

    vertices: FrozenSet[int]
    noisy_density: float
    budget: PrivacyBudget
    rounds: int = 0
    transcript: Optional[Transcript] = None
    accountant: Optional[PrivacyAccountant] = None
    true_density: Optional[Fraction] = None
    eps: Optional[float] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def non_private(self) -> bool:
        return self.budget.non_private

    def evaluate(self, g: Union[Graph, NodeWeightedGraph]) -> Fraction:
        """Non-private evaluation of the returned set's exact density."""
        if isinstance(g, NodeWeightedGraph):
            self.true_density = weighted_density(g, self.vertices)
        else:
            self.true_density = density(g, self.vertices)
        return self.true_density


@dataclass
class DirectedResult:
    """A (sources, targets) pair chosen by a private directed algorithm."""

    sources: FrozenSet[int]
    targets: FrozenSet[int]
    noisy_density: float
    budget: PrivacyBudget
    rounds: int = 0
    transcript: Optional[Transcript] = None
    accountant: Optional[PrivacyAccountant] = None
    true_density: Optional[float] = None
    eps: Optional[float] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def non_private(self) -> bool:
        return self.budget.non_private

    @property
    def vertices(self) -> FrozenSet[int]:
        return self.sources | self.targets

    def evaluate(self, g: DirectedGraph) -> float:
        if not self.sources or not self.targets:
            self.true_density = float("-inf")
        else:
            self.true_density = directed_density(g, self.sources, self.targets)
        return self.true_density
