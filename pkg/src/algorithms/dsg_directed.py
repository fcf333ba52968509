"""
Private directed densest subgraph through the bipartite lift.

A digraph G and a scale t > 0 give an undirected bipartite graph on 2n
vertices: left copy v (id v) and right copy v (id n + v), with an edge
{u_L, w_R} for every arc u -> w. Left copies cost 1/(2t), right copies t/2;
dividing both by alpha_t = min(1/(2t), t/2) makes the cheaper side cost
exactly 1. The lifted graph's structure does not depend on t, so the
runtime holds it once and the protocols pass the per-scale costs.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from ..graph.density import cross_edges, induced_edges, weighted_density
from ..graph.graphs import DirectedGraph, Graph, NodeWeightedGraph, lift_costs
from ..ledp.randomizers import MaskedDegreeRandomizer
from ..ledp.runtime import Curator, ProtocolRun, run_protocol
from ..privacy.budget import (
    NoiseSpec,
    arithmetic_spacing,
    directed_arithmetic_grid_size,
    directed_units,
    lift_c_max,
    sigma_for_target,
    t_grid,
    t_grid_size,
)
from ..privacy.samplers import RngStreams
from ..utils.error_handler import InvalidArgumentError
from ..utils.logger import get_logger
from .dsg_private import _select, check_utility_hypothesis, default_T, ps_select
from .dsg_weighted import LambdaGrid, _arithmetic_guess_run, weighted_dsg_ledp_protocol
from .results import DirectedResult

logger = get_logger(__name__)

Seed = Union[int, RngStreams]
CROSS_DEGREE = "cross_degree"


def bipartite_graph(g: DirectedGraph) -> Graph:
    """The scale-free structure of every lift: arcs u -> w become edges {u, n + w}."""
    edges = g.edges.copy()
    edges[:, 1] += g.n
    return Graph(2 * g.n, edges)


def split_sides(vertices: Iterable[int], n: int) -> Tuple[frozenset, frozenset]:
    """Lifted vertex set -> (S from left copies, T from right copies)."""
    vertices = [int(v) for v in vertices]
    return (
        frozenset(v for v in vertices if v < n),
        frozenset(v - n for v in vertices if v >= n),
    )


def join_sides(sources: Iterable[int], targets: Iterable[int], n: int) -> frozenset:
    return frozenset(int(v) for v in sources) | frozenset(int(v) + n for v in targets)


@dataclass(frozen=True)
class BipartiteLift:
    base: DirectedGraph
    t: Union[float, Fraction]
    alpha: Union[float, Fraction]
    left_cost: Union[float, Fraction]
    right_cost: Union[float, Fraction]
    lifted: NodeWeightedGraph

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def cost_vector(self) -> np.ndarray:
        return self.lifted.cost_array

    def split(self, vertices: Iterable[int]) -> Tuple[frozenset, frozenset]:
        return split_sides(vertices, self.n)

    def join(self, sources: Iterable[int], targets: Iterable[int]) -> frozenset:
        return join_sides(sources, targets, self.n)

    def density(self, vertices: Iterable[int]) -> Fraction:
        """Weighted density in the rescaled lift."""
        return weighted_density(self.lifted, vertices)


def lift(g: DirectedGraph, t: Union[float, Fraction]) -> BipartiteLift:
    """Rescaled bipartite lift of ``g`` at scale ``t`` (t > 0)."""
    alpha, left, right = lift_costs(t)
    costs = [left] * g.n + [right] * g.n
    return BipartiteLift(
        base=g,
        t=t,
        alpha=alpha,
        left_cost=left,
        right_cost=right,
        lifted=NodeWeightedGraph(bipartite_graph(g), costs),
    )


def lifted_density_squared(g: DirectedGraph, sources: Iterable[int], targets: Iterable[int],
                           t_squared: Union[int, Fraction]) -> Fraction:
    """
    Exact squared density of S_L u T_R in the unrescaled lift at scale t:
    |E(S,T)|^2 / (|S|^2 / (4 t^2) + |S||T| / 2 + |T|^2 t^2 / 4).
    """
    t_squared = Fraction(t_squared)
    if t_squared <= 0:
        raise InvalidArgumentError(f"lift scale must be positive, got t^2={t_squared}")
    sources, targets = frozenset(sources), frozenset(targets)
    s, t = len(sources), len(targets)
    e = cross_edges(g, sources, targets) if s and t else 0
    denominator = Fraction(s * s) / (4 * t_squared) + Fraction(s * t, 2) + Fraction(t * t) * t_squared / 4
    if denominator == 0:
        raise InvalidArgumentError("empty subset has undefined density")
    return Fraction(e * e) / denominator


def _lift_cost_vector(n: int, t: float) -> np.ndarray:
    _, left, right = lift_costs(t)
    return np.concatenate([np.full(n, float(left)), np.full(n, float(right))])


# ------------------------------------------------------------------ protocols

def directed_dsg_ledp_protocol(curator: Curator, T: int, varsigma: float, c: float = 1.0, beta: float = 0.1):
    """
    Per grid scale t_i: the weighted pipeline on the lift, a side split, and
    one noisy cross-degree query deg_T(v) from every v in S. Candidates with
    an empty side score -inf.
    """
    n = curator.n // 2
    candidates = []
    for i, t in enumerate(t_grid(n, beta)):
        curator.broadcast("scale", t)
        costs = _lift_cost_vector(n, t)
        lifted_set, _, _ = weighted_dsg_ledp_protocol(
            curator, T, varsigma, c=c, beta=beta, costs=costs, c_max=lift_c_max(t), key=("scale", i)
        )
        sources, targets = split_sides(lifted_set, n)
        mask = np.zeros(curator.n, dtype=bool)
        mask[[n + v for v in targets]] = True
        curator.broadcast("targets", mask)
        degrees = curator.collect(
            MaskedDegreeRandomizer(NoiseSpec.gaussian(varsigma), topic="targets", name=CROSS_DEGREE),
            parties=sorted(sources),
            key=("scale", i, "cross"),
        )
        if sources and targets:
            estimate = float(degrees.sum()) / math.sqrt(len(sources) * len(targets))
        else:
            estimate = float("-inf")
        curator.note("scale_estimate", {"scale": i, "estimate": estimate})
        candidates.append(((sources, targets), estimate))
    return _select(curator, candidates)


def centralized_directed_core_protocol(
    curator: Curator,
    T: int,
    varsigma: float,
    s_size: Optional[int] = None,
    t_size: Optional[int] = None,
    guess_index: Optional[int] = None,
    round_index: Optional[int] = None,
):
    """
    Random scale t = sqrt(s'/t') with s', t' uniform on 1..n, random
    arithmetic guess, one weighted MWU run and peeling on the lift, then one
    trusted release of the split's directed density.
    """
    n = curator.n // 2
    s_size = curator.draw_index("s_size", n) + 1 if s_size is None else int(s_size)
    t_size = curator.draw_index("t_size", n) + 1 if t_size is None else int(t_size)
    if not (1 <= s_size <= n and 1 <= t_size <= n):
        raise InvalidArgumentError(f"side sizes must lie in 1..{n}, got ({s_size}, {t_size})")
    t = math.sqrt(s_size / t_size)
    curator.broadcast("scale", t)
    costs = _lift_cost_vector(n, t)
    tau = math.sqrt(T) * varsigma
    spacing = arithmetic_spacing(n, tau, T)
    count = directed_arithmetic_grid_size(n, tau, T)
    grid = LambdaGrid(tuple(k * spacing for k in range(1, count + 1)), "arithmetic", spacing)
    lifted_set, _, k = _arithmetic_guess_run(curator, grid, T, varsigma, costs, guess_index, round_index, ())
    sources, targets = split_sides(lifted_set, n)
    both = bool(sources) and bool(targets)

    def directed_value(lifted: Graph) -> float:
        if not both:
            return 0.0
        return induced_edges(lifted, lifted_set) / math.sqrt(len(sources) * len(targets))

    value = curator.release("directed_density", directed_value, NoiseSpec.gaussian(varsigma), key=("density",))
    estimate = value if both else float("-inf")
    curator.note("guess", {"s_size": s_size, "t_size": t_size, "k": k, "estimate": estimate})
    return (sources, targets), estimate, k


# ---------------------------------------------------------------- public API

def _as_directed_result(run: ProtocolRun, keep_transcript: bool, **extras) -> DirectedResult:
    (sources, targets), estimate, candidate = run.output
    extras.setdefault("candidate", candidate)
    return DirectedResult(
        sources=frozenset(sources),
        targets=frozenset(targets),
        noisy_density=float(estimate),
        budget=run.budget,
        rounds=run.rounds,
        transcript=run.transcript if keep_transcript else None,
        accountant=run.accountant,
        extras=extras,
    )


def directed_dsg_ledp(
    g: DirectedGraph,
    T: int,
    varsigma: float,
    c: float = 1.0,
    beta: float = 0.1,
    seed: Seed = 0,
    mode: str = "local",
    keep_transcript: bool = True,
) -> DirectedResult:
    """
    Local-edge-DP directed densest subgraph over the scale grid
    t_i = (1+beta)^i / sqrt(n); budget M / varsigma^2.
    """
    if g.n < 2:
        raise InvalidArgumentError(f"need at least two vertices, got n={g.n}")
    logger.info(
        f"directed_dsg_ledp: n={g.n}, T={T}, varsigma={varsigma:.4g}, scales={t_grid_size(g.n, beta)}, "
        f"units={directed_units(g.n, c, beta)}"
    )
    check_utility_hypothesis(g.n, T, varsigma)
    run = run_protocol(
        bipartite_graph(g),
        lambda cur: directed_dsg_ledp_protocol(cur, T, varsigma, c=c, beta=beta),
        seed,
        mode=mode,
        keep_transcript=keep_transcript,
    )
    return _as_directed_result(run, keep_transcript, T=T, varsigma=varsigma)


def centralized_directed_core(
    g: DirectedGraph,
    T: int,
    varsigma: float,
    seed: Seed = 0,
    mode: str = "central",
    keep_transcript: bool = True,
    s_size: Optional[int] = None,
    t_size: Optional[int] = None,
    guess_index: Optional[int] = None,
    round_index: Optional[int] = None,
) -> DirectedResult:
    """One random (scale, guess) run; budget 3/(2 varsigma^2). Needs central mode for the release."""
    run = run_protocol(
        bipartite_graph(g),
        lambda cur: centralized_directed_core_protocol(
            cur, T, varsigma, s_size=s_size, t_size=t_size, guess_index=guess_index, round_index=round_index
        ),
        seed,
        mode=mode,
        keep_transcript=keep_transcript,
    )
    result = _as_directed_result(run, keep_transcript, T=T, varsigma=varsigma)
    result.extras["guess"] = result.extras.pop("candidate")
    return result


def centralized_directed_dsg(
    g: DirectedGraph,
    eps: float,
    delta: float,
    c: float = 1.0,
    seed: Seed = 0,
    T: Optional[int] = None,
    varsigma: Optional[float] = None,
) -> DirectedResult:
    """Centralized directed pipeline, varsigma = 8 sqrt(ln(n^c / delta)) / eps, wrapped in ps_select."""
    if varsigma is None:
        varsigma = sigma_for_target(eps, delta, g.n, c=c, variant="centralized-directed")
    if T is None:
        T = default_T(g.n, varsigma)
    gamma = float(g.n) ** (-c)
    check_utility_hypothesis(g.n, T, varsigma)
    streams = seed if isinstance(seed, RngStreams) else RngStreams(seed)
    result = ps_select(
        lambda s: centralized_directed_core(g, T, varsigma, seed=s, keep_transcript=False),
        gamma,
        streams,
        delta=delta,
    )
    result.extras.update(T=T, varsigma=varsigma)
    return result
