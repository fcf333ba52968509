"""
Private densest subgraph on node-weighted graphs (density |E(S)| / c(S)).

The MWU loop and peeling are shared with the unweighted module; costs enter
through the runtime's public cost vector or an explicit ``costs`` argument
(the directed pipeline reuses these protocols on a lift whose costs change
with the scale t).
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..graph.density import weighted_density
from ..graph.graphs import NodeWeightedGraph, Ordering
from ..ledp.runtime import Curator, ProtocolRun, run_protocol
from ..privacy.budget import (
    arithmetic_grid_size,
    arithmetic_spacing,
    lambda_grid_size,
    repetitions,
    sigma_for_target,
)
from ..privacy.samplers import RngStreams
from ..utils.error_handler import InvalidArgumentError
from ..utils.logger import get_logger
from .dsg_private import (
    MwuOutcome,
    _as_result,
    _select,
    check_utility_hypothesis,
    default_T,
    mwu_protocol,
    peel_prefix,
    ps_select,
)
from .results import DensityResult

logger = get_logger(__name__)

Seed = Union[int, RngStreams]


@dataclass(frozen=True)
class LambdaGrid:
    """Density guesses: geometric lambda0 (1+beta)^i, or arithmetic k L for k = 1..N."""

    values: Tuple[float, ...]
    kind: str
    step: float

    @classmethod
    def geometric(cls, n: int, c_max: float, beta: float) -> "LambdaGrid":
        lambda0 = 1.0 / (2.0 * float(c_max))
        count = lambda_grid_size(n, c_max, beta)
        return cls(tuple(lambda0 * (1.0 + beta) ** i for i in range(count)), "geometric", 1.0 + beta)

    @classmethod
    def arithmetic(cls, n: int, c_max: float, tau: float, T: int) -> "LambdaGrid":
        spacing = arithmetic_spacing(n, tau, T)
        count = arithmetic_grid_size(n, c_max, tau, T)
        return cls(tuple(k * spacing for k in range(1, count + 1)), "arithmetic", spacing)

    def __len__(self) -> int:
        return len(self.values)

    def covers(self, lam: float) -> bool:
        """Some grid point lies in [lam, (1+beta) lam) (geometric) or [lam, lam + L) (arithmetic)."""
        upper = lam * self.step if self.kind == "geometric" else lam + self.step
        return any(lam <= v < upper for v in self.values)


def plp_feasibility_margin(g: NodeWeightedGraph, x: Sequence[float]) -> Tuple[float, float]:
    """
    Budget and cover of a primal vector x for the weighted packing LP.

    The minimum of <x, q(sigma)> over all orderings is attained by sorting
    x nonincreasingly, where it equals the sum over edges of min(x_u, x_v).

    Returns:
        (sum_v c_v x_v, min_sigma <x, q(sigma)>)
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (g.n,):
        raise InvalidArgumentError(f"expected {g.n} entries, got shape {x.shape}")
    if (x < 0).any():
        raise InvalidArgumentError("primal vector must be nonnegative")
    budget_sum = math.fsum(g.cost_array * x)
    e = g.graph.edges
    min_cover = math.fsum(np.minimum(x[e[:, 0]], x[e[:, 1]])) if e.size else 0.0
    return budget_sum, min_cover


def is_plp_feasible(g: NodeWeightedGraph, x: Sequence[float], lam: float, tol: float = 1e-9) -> bool:
    budget_sum, min_cover = plp_feasibility_margin(g, x)
    return abs(budget_sum - 1.0) <= tol and min_cover >= lam - tol


def threshold_sets(x: Sequence[float]) -> List[frozenset]:
    """S_r = {v : x_v >= r} for every distinct positive value r of x, largest r first."""
    x = np.asarray(x, dtype=np.float64)
    levels = np.unique(x[x > 0])[::-1]
    return [frozenset(int(v) for v in np.flatnonzero(x >= r)) for r in levels]


def best_threshold_set(g: NodeWeightedGraph, x: Sequence[float]) -> Tuple[frozenset, Fraction]:
    """The threshold set of x with the largest exact weighted density."""
    best: Optional[Tuple[frozenset, Fraction]] = None
    for s in threshold_sets(x):
        value = weighted_density(g, s)
        if best is None or value > best[1]:
            best = (s, value)
    if best is None:
        raise InvalidArgumentError("primal vector has no positive entry")
    return best


# ------------------------------------------------------------------ protocols

def weighted_dsg_ledp_protocol(
    curator: Curator,
    T: int,
    varsigma: float,
    c: float = 1.0,
    beta: float = 0.1,
    costs: Optional[Sequence[float]] = None,
    c_max: Optional[float] = None,
    key: Tuple = (),
):
    """For every geometric guess lambda_i, c log2 n MWU runs each followed by weighted peeling."""
    costs = np.asarray(curator.costs if costs is None else costs, dtype=np.float64)
    c_max = float(costs.max()) if c_max is None else float(c_max)
    tau = math.sqrt(T) * varsigma
    grid = LambdaGrid.geometric(curator.n, c_max, beta)
    candidates = []
    for i, lam in enumerate(grid.values):
        for j in range(repetitions(curator.n, c)):
            mwu = mwu_protocol(curator, lam, T, tau, costs=costs, key=key + ("grid", i, "rep", j, "order"))
            candidates.append(
                peel_prefix(curator, mwu.ordering, varsigma, costs=costs, key=key + ("grid", i, "rep", j, "peel"))
            )
    return _select(curator, candidates)


def centralized_weighted_core_protocol(
    curator: Curator,
    T: int,
    varsigma: float,
    costs: Optional[Sequence[float]] = None,
    c_max: Optional[float] = None,
    guess_index: Optional[int] = None,
    round_index: Optional[int] = None,
    key: Tuple = (),
):
    """
    One uniformly drawn arithmetic guess k L (k = 1..N), one MWU run, one
    weighted peeling. ``guess_index`` forces k.
    """
    costs = np.asarray(curator.costs if costs is None else costs, dtype=np.float64)
    c_max = float(costs.max()) if c_max is None else float(c_max)
    tau = math.sqrt(T) * varsigma
    grid = LambdaGrid.arithmetic(curator.n, c_max, tau, T)
    return _arithmetic_guess_run(curator, grid, T, varsigma, costs, guess_index, round_index, key)


def _arithmetic_guess_run(curator, grid, T, varsigma, costs, guess_index, round_index, key):
    if guess_index is None:
        k = curator.draw_index("guess", len(grid)) + 1
    elif 1 <= guess_index <= len(grid):
        k = guess_index
    else:
        raise InvalidArgumentError(f"guess index {guess_index} outside 1..{len(grid)}")
    lam = grid.values[k - 1]
    tau = math.sqrt(T) * varsigma
    mwu = mwu_protocol(curator, lam, T, tau, costs=costs, key=key + ("rep", 0, "order"), round_index=round_index)
    vertices, estimate = peel_prefix(curator, mwu.ordering, varsigma, costs=costs, key=key + ("rep", 0, "peel"))
    return vertices, estimate, k


# ---------------------------------------------------------------- public API

def weighted_peeling(g: NodeWeightedGraph, sigma: Ordering, varsigma: float, seed: Seed = 0,
                     mode: str = "local") -> DensityResult:
    """Peeling with denominator c(prefix); budget 1/(2 varsigma^2)."""
    run = run_protocol(g, lambda cur: peel_prefix(cur, sigma, varsigma) + (0,), seed, mode=mode)
    return _as_result(run, True)


def weighted_nop_mwu(
    g: NodeWeightedGraph,
    lambda_guess: float,
    T: int,
    tau: float,
    seed: Seed = 0,
    mode: str = "local",
    record_orderings: bool = False,
    round_index: Optional[int] = None,
) -> Tuple[MwuOutcome, ProtocolRun]:
    """
    Weighted noisy-order MWU at guess ``lambda_guess``.

    The outcome's ``x`` is p^(t)_v / c_v for the drawn round t; its
    ordering sorts by that ratio. Budget T/(2 tau^2).
    """
    if not lambda_guess > 0:
        raise InvalidArgumentError(f"density guess must be positive, got {lambda_guess}")
    run = run_protocol(
        g,
        lambda cur: mwu_protocol(cur, lambda_guess, T, tau, record_orderings=record_orderings,
                                 round_index=round_index),
        seed,
        mode=mode,
    )
    return run.output, run


def weighted_dsg_ledp(
    g: NodeWeightedGraph,
    T: int,
    varsigma: float,
    c: float = 1.0,
    beta: float = 0.1,
    seed: Seed = 0,
    mode: str = "local",
    keep_transcript: bool = True,
) -> DensityResult:
    """Weighted local-edge-DP densest subgraph over a geometric density grid; budget K/varsigma^2."""
    grid = LambdaGrid.geometric(g.n, g.c_max, beta)
    logger.info(f"weighted_dsg_ledp: n={g.n}, T={T}, varsigma={varsigma:.4g}, grid={len(grid)}")
    check_utility_hypothesis(g.n, T, varsigma)
    run = run_protocol(
        g,
        lambda cur: weighted_dsg_ledp_protocol(cur, T, varsigma, c=c, beta=beta, c_max=float(g.c_max)),
        seed,
        mode=mode,
        keep_transcript=keep_transcript,
    )
    return _as_result(run, keep_transcript, T=T, varsigma=varsigma, grid=len(grid))


def centralized_weighted_core(
    g: NodeWeightedGraph,
    T: int,
    varsigma: float,
    seed: Seed = 0,
    mode: str = "central",
    keep_transcript: bool = True,
    guess_index: Optional[int] = None,
    round_index: Optional[int] = None,
) -> DensityResult:
    """One arithmetic-guess MWU run plus weighted peeling; budget 1/varsigma^2."""
    run = run_protocol(
        g,
        lambda cur: centralized_weighted_core_protocol(
            cur, T, varsigma, c_max=float(g.c_max), guess_index=guess_index, round_index=round_index
        ),
        seed,
        mode=mode,
        keep_transcript=keep_transcript,
    )
    result = _as_result(run, keep_transcript, T=T, varsigma=varsigma)
    result.extras["guess"] = result.extras.pop("candidate")
    return result


def centralized_weighted_dsg(
    g: NodeWeightedGraph,
    eps: float,
    delta: float,
    c: float = 1.0,
    seed: Seed = 0,
    T: Optional[int] = None,
    varsigma: Optional[float] = None,
    mode: str = "central",
) -> DensityResult:
    """Centralized weighted pipeline wrapped in ps_select with gamma = n^-c."""
    if varsigma is None:
        varsigma = sigma_for_target(eps, delta, g.n, c=c, variant="centralized-weighted")
    if T is None:
        T = default_T(g.n, varsigma)
    gamma = float(g.n) ** (-c)
    check_utility_hypothesis(g.n, T, varsigma)
    streams = seed if isinstance(seed, RngStreams) else RngStreams(seed)
    result = ps_select(
        lambda s: centralized_weighted_core(g, T, varsigma, seed=s, mode=mode, keep_transcript=False),
        gamma,
        streams,
        delta=delta,
    )
    result.extras.update(T=T, varsigma=varsigma)
    return result
