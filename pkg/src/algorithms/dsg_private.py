"""
Private densest subgraph on unweighted graphs.

Curator programs (``*_protocol``) run inside a ``ProtocolRuntime`` and only
ever see randomized outputs. The public wrappers build the runtime, run the
program and package a ``DensityResult``.

Noise keys:
    ("rep", i, "order", t)  round t of the ordering loop of repetition i
    ("rep", i, "peel")      the peeling query of repetition i
The noisy MWU and the load-based core use identical keys, so both see the
same random string and produce the same orderings.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .. import config
from ..graph.density import best_noisy_prefix
from ..graph.graphs import Graph, NodeWeightedGraph, Ordering
from ..ledp.randomizers import PeelCountRandomizer
from ..ledp.runtime import Curator, ProtocolRun, run_protocol
from ..mwu.hedge import HedgeState
from ..privacy.budget import NoiseSpec, ps_select_epsilon, repetitions, sigma_for_target
from ..privacy.samplers import RngStreams, geometric_count
from ..utils.error_handler import InvalidArgumentError
from ..utils.logger import get_logger
from .results import DensityResult

logger = get_logger(__name__)

MWU_COUNTS = "mwu_counts"
PEEL_COUNTS = "peel_counts"

Seed = Union[int, RngStreams]
Key = Tuple

_accounting_note_logged = False


def _log_accounting_note() -> None:
    global _accounting_note_logged
    if not _accounting_note_logged:
        logger.info("noisy-order MWU is charged T/(2 tau^2) zCDP (T gaussian rounds of sensitivity 1)")
        _accounting_note_logged = True


def check_utility_hypothesis(n: int, T: int, varsigma: float) -> bool:
    """Warn when sqrt(T) * varsigma < n; the utility guarantee assumes otherwise."""
    if varsigma > 0 and math.sqrt(T) * varsigma < n:
        logger.warning(
            f"sqrt(T)*varsigma = {math.sqrt(T) * varsigma:.4g} < n = {n}; "
            "utility guarantees do not apply to this run"
        )
        return False
    return True


def default_T(n: int, varsigma: float, cap: Optional[int] = None) -> int:
    """
    T = ceil(n^2 / varsigma^2), capped.

    Raises:
        InvalidArgumentError: for zero-noise runs, which need an explicit T
    """
    cap = config.T_CAP if cap is None else int(cap)
    if not varsigma > 0:
        raise InvalidArgumentError("zero-noise runs need an explicit T")
    T = max(1, int(math.ceil(n * n / (varsigma * varsigma))))
    if T > cap:
        logger.warning(f"T = {T} exceeds the cap {cap}; running {cap} rounds weakens the utility guarantee")
        return cap
    return T


@dataclass(frozen=True)
class MwuConfig:
    """Parameters of one noisy MWU run with density guess ``lam``."""

    T: int
    tau: float
    lam: float
    width: float
    nu: float
    alpha_bound: float

    @classmethod
    def build(cls, n: int, T: int, tau: float, lam: float) -> "MwuConfig":
        if not lam > 0:
            raise InvalidArgumentError(f"density guess must be positive, got {lam}")
        if T < 1:
            raise InvalidArgumentError(f"T must be positive, got {T}")
        width = (n + tau) / lam
        alpha = 8.0 * width * math.sqrt(math.log(n) / T) if n > 1 else 0.0
        return cls(T=T, tau=tau, lam=lam, width=width, nu=tau / (width * lam), alpha_bound=alpha)


@dataclass
class MwuOutcome:
    """
    Result of an ordering loop: the uniformly drawn round, its distribution
    (MWU only) and ordering, and optionally every round's ordering.
    """

    round: int
    ordering: Ordering
    distribution: Optional[np.ndarray] = None
    orderings: List[Ordering] = field(default_factory=list)

    @property
    def x(self) -> Optional[np.ndarray]:
        return self.distribution


def _pick_round(curator: Curator, T: int, round_index: Optional[int]) -> int:
    if round_index is None:
        return curator.draw_index("round", T)
    if not 0 <= round_index < T:
        raise InvalidArgumentError(f"round index {round_index} outside 0..{T - 1}")
    return round_index


def _cost_vector(curator: Curator, costs: Optional[Sequence[float]]) -> np.ndarray:
    return np.asarray(curator.costs if costs is None else costs, dtype=np.float64)


# ------------------------------------------------------------------ protocols

def peel_prefix(
    curator: Curator,
    sigma: Ordering,
    varsigma: float,
    costs: Optional[Sequence[float]] = None,
    key: Key = ("peel",),
    name: str = PEEL_COUNTS,
) -> Tuple[frozenset, float]:
    """
    Peeling: one noisy peel-count query, then the prefix of ``sigma`` with
    the largest noisy density sum(q_hat) / |prefix| (or / c(prefix)).

    Returns:
        (prefix, its noisy density)
    """
    if sigma.n != curator.n:
        raise InvalidArgumentError(f"ordering covers {sigma.n} vertices, graph has {curator.n}")
    costs = _cost_vector(curator, costs)
    curator.broadcast("ordering", sigma.position)
    q_hat = curator.collect(PeelCountRandomizer(NoiseSpec.gaussian(varsigma), name=name), key=key)
    length, estimate = best_noisy_prefix(q_hat[sigma.perm], np.cumsum(costs[sigma.perm]))
    curator.note("prefix", {"length": length, "estimate": estimate})
    return sigma.prefix(length), estimate


def mwu_scores(loads: np.ndarray, costs: np.ndarray, scale: float) -> np.ndarray:
    """
    Sort keys of the Hedge ordering by p_v / c_v, from exact cumulative loads.

    log p_v = const + scale * L_v / c_v, so with uniform costs the key is the
    load itself and ties between equal loads fall to the vertex id.
    """
    if np.all(costs == costs[0]):
        return loads
    return scale * loads / costs - np.log(costs)


def mwu_protocol(
    curator: Curator,
    lam: float,
    T: int,
    tau: float,
    costs: Optional[Sequence[float]] = None,
    key: Key = ("rep", 0, "order"),
    record_orderings: bool = False,
    round_index: Optional[int] = None,
) -> MwuOutcome:
    """
    Noisy-order MWU with density guess ``lam``.

    Each round the curator broadcasts the ordering of V by nonincreasing
    p_v / c_v, nodes answer q(sigma)_v + N(0, tau^2), and Hedge is fed the
    losses (1/width)(1 - q_hat_v / (c_v lam)). The ordering is taken from the
    cumulative noisy loads, summed in the same order as the load-based loop.
    """
    n = curator.n
    cfg = MwuConfig.build(n, T, tau, lam)
    costs = _cost_vector(curator, costs)
    _log_accounting_note()
    chosen = _pick_round(curator, T, round_index)
    state = HedgeState(n, T)
    scale = state.hedge_step / (cfg.width * cfg.lam)
    loads = np.zeros(n)
    randomizer = PeelCountRandomizer(NoiseSpec.gaussian(tau), name=MWU_COUNTS)
    outcome: Optional[MwuOutcome] = None
    orderings: List[Ordering] = []
    for t in range(T):
        sigma = Ordering.by_scores_desc(mwu_scores(loads, costs, scale))
        if record_orderings:
            orderings.append(sigma)
        if t == chosen:
            outcome = MwuOutcome(round=t, ordering=sigma, distribution=state.distribution() / costs)
        curator.broadcast("ordering", sigma.position)
        q_hat = curator.collect(randomizer, key=key + (t,))
        if t < T - 1:
            state.update((1.0 - q_hat / (costs * cfg.lam)) / cfg.width)
            loads = loads + q_hat
    outcome.orderings = orderings
    return outcome



def dsg_ledp_core_protocol(
    curator: Curator,
    T: int,
    tau: float,
    key: Key = ("rep", 0, "order"),
    record_orderings: bool = False,
    round_index: Optional[int] = None,
) -> MwuOutcome:
    """
    Load-based ordering loop: broadcast the ordering by nonincreasing load,
    collect noisy peel counts, add them to the loads. Returns the ordering
    of a uniformly drawn round.
    """
    if T < 1:
        raise InvalidArgumentError(f"T must be positive, got {T}")
    chosen = _pick_round(curator, T, round_index)
    loads = np.zeros(curator.n)
    randomizer = PeelCountRandomizer(NoiseSpec.gaussian(tau), name=MWU_COUNTS)
    outcome: Optional[MwuOutcome] = None
    orderings: List[Ordering] = []
    for t in range(T):
        pi = Ordering.by_scores_desc(loads)
        if record_orderings:
            orderings.append(pi)
        if t == chosen:
            outcome = MwuOutcome(round=t, ordering=pi)
        curator.broadcast("ordering", pi.position)
        loads = loads + curator.collect(randomizer, key=key + (t,))
    outcome.orderings = orderings
    return outcome


def _select(curator: Curator, candidates: List[Tuple[frozenset, float]]) -> Tuple[frozenset, float, int]:
    estimates = np.array([est for _, est in candidates], dtype=np.float64)
    best = int(np.argmax(estimates))
    curator.note("select", {"candidate": best, "estimate": float(estimates[best])})
    return candidates[best][0], candidates[best][1], best


def dsg_ledp_protocol(curator: Curator, T: int, varsigma: float, c: float = 1.0):
    """c log2 n independent core runs, each peeled; the noisiest-best prefix wins."""
    tau = math.sqrt(T) * varsigma
    candidates = []
    for i in range(repetitions(curator.n, c)):
        core = dsg_ledp_core_protocol(curator, T, tau, key=("rep", i, "order"))
        candidates.append(peel_prefix(curator, core.ordering, varsigma, key=("rep", i, "peel")))
    return _select(curator, candidates)


def centralized_dsg_core_protocol(curator: Curator, T: int, varsigma: float, round_index: Optional[int] = None):
    tau = math.sqrt(T) * varsigma
    core = dsg_ledp_core_protocol(curator, T, tau, key=("rep", 0, "order"), round_index=round_index)
    vertices, estimate = peel_prefix(curator, core.ordering, varsigma, key=("rep", 0, "peel"))
    return vertices, estimate, 0


# ---------------------------------------------------------------- public API

def _as_result(run: ProtocolRun, keep_transcript: bool, **extras) -> DensityResult:
    vertices, estimate, candidate = run.output
    extras.setdefault("candidate", candidate)
    return DensityResult(
        vertices=frozenset(vertices),
        noisy_density=float(estimate),
        budget=run.budget,
        rounds=run.rounds,
        transcript=run.transcript if keep_transcript else None,
        accountant=run.accountant,
        extras=extras,
    )


def peeling(
    g: Union[Graph, NodeWeightedGraph],
    sigma: Ordering,
    varsigma: float,
    seed: Seed = 0,
    mode: str = "local",
) -> DensityResult:
    """Run one peeling pass of ``sigma`` on ``g``; budget 1/(2 varsigma^2)."""
    run = run_protocol(g, lambda cur: peel_prefix(cur, sigma, varsigma) + (0,), seed, mode=mode)
    return _as_result(run, True)


def nop_mwu(
    g: Graph,
    lambda_star: float,
    T: int,
    tau: float,
    seed: Seed = 0,
    mode: str = "local",
    record_orderings: bool = False,
    round_index: Optional[int] = None,
) -> Tuple[MwuOutcome, ProtocolRun]:
    """
    Noisy-order MWU fed the true optimum density. Test oracle only: the
    optimum is private, so this is not a private algorithm.
    """
    if not lambda_star > 0:
        raise InvalidArgumentError(f"lambda_star must be positive, got {lambda_star}")
    run = run_protocol(
        g,
        lambda cur: mwu_protocol(cur, lambda_star, T, tau, record_orderings=record_orderings,
                                 round_index=round_index),
        seed,
        mode=mode,
    )
    return run.output, run


def dsg_ledp_core(
    g: Graph,
    T: int,
    tau: float,
    seed: Seed = 0,
    mode: str = "local",
    record_orderings: bool = False,
    round_index: Optional[int] = None,
) -> Tuple[MwuOutcome, ProtocolRun]:
    run = run_protocol(
        g,
        lambda cur: dsg_ledp_core_protocol(cur, T, tau, record_orderings=record_orderings,
                                           round_index=round_index),
        seed,
        mode=mode,
    )
    return run.output, run


def dsg_ledp(
    g: Graph,
    T: int,
    varsigma: float,
    c: float = 1.0,
    seed: Seed = 0,
    mode: str = "local",
    keep_transcript: bool = True,
) -> DensityResult:
    """
    Local-edge-DP densest subgraph.

    Args:
        g: Private graph
        T: Rounds per ordering loop
        varsigma: Per-query gaussian scale (0 for a non-private debug run)
        c: Repetition constant; ceil(c log2 n) repetitions
        seed: Root seed or substreams
        mode: Runtime execution mode

    Returns:
        DensityResult with budget c log2(n) / varsigma^2 zCDP
    """
    logger.info(f"dsg_ledp: n={g.n}, T={T}, varsigma={varsigma:.4g}, c={c}")
    check_utility_hypothesis(g.n, T, varsigma)
    run = run_protocol(g, lambda cur: dsg_ledp_protocol(cur, T, varsigma, c), seed, mode=mode,
                       keep_transcript=keep_transcript)
    return _as_result(run, keep_transcript, T=T, varsigma=varsigma, repetitions=repetitions(g.n, c))


def centralized_dsg_core(
    g: Graph,
    T: int,
    varsigma: float,
    seed: Seed = 0,
    mode: str = "central",
    keep_transcript: bool = True,
    round_index: Optional[int] = None,
) -> DensityResult:
    """One core run plus one peeling pass; budget 1/varsigma^2."""
    run = run_protocol(
        g,
        lambda cur: centralized_dsg_core_protocol(cur, T, varsigma, round_index=round_index),
        seed,
        mode=mode,
        keep_transcript=keep_transcript,
    )
    return _as_result(run, keep_transcript, T=T, varsigma=varsigma)


def ps_select(
    core: Callable[[RngStreams], DensityResult],
    gamma: float,
    streams: RngStreams,
    delta: Optional[float] = None,
) -> DensityResult:
    """
    Repeated selection: run J ~ Geometric(gamma) independent copies of
    ``core`` (support 1, 2, ...) and keep the one with the highest noisy
    density.

    The returned budget is one copy's zCDP; with ``delta`` the wrapper's
    epsilon 6 sqrt(rho ln(1/(gamma delta))) is attached as ``eps``.
    """
    if not 0 < gamma < 1:
        raise InvalidArgumentError(f"gamma must lie in (0, 1), got {gamma}")
    copies = geometric_count(streams.generator("ps_select", "copies"), gamma)
    logger.debug(f"ps_select: running {copies} copies (gamma={gamma:.4g})")
    best: Optional[DensityResult] = None
    total_rounds = 0
    for j in range(copies):
        result = core(streams.child("copy", j))
        total_rounds += result.rounds
        if best is None or result.noisy_density > best.noisy_density:
            best = result
    best.extras.update(copies=copies, total_rounds=total_rounds, gamma=gamma)
    if delta is not None:
        best.eps = ps_select_epsilon(best.budget.zcdp_budget, gamma, delta)
    return best


def centralized_dsg(
    g: Graph,
    eps: float,
    delta: float,
    c: float = 1.0,
    seed: Seed = 0,
    T: Optional[int] = None,
    varsigma: Optional[float] = None,
    mode: str = "central",
) -> DensityResult:
    """
    (eps, delta)-DP centralized pipeline: varsigma = 6 sqrt(ln(n^c / delta)) / eps,
    T = ceil(n^2 / varsigma^2) capped, wrapped in ps_select with gamma = n^-c.
    """
    if varsigma is None:
        varsigma = sigma_for_target(eps, delta, g.n, c=c, variant="centralized")
    if T is None:
        T = default_T(g.n, varsigma)
    gamma = float(g.n) ** (-c)
    logger.info(f"centralized_dsg: n={g.n}, T={T}, varsigma={varsigma:.4g}, gamma={gamma:.4g}")
    check_utility_hypothesis(g.n, T, varsigma)
    streams = seed if isinstance(seed, RngStreams) else RngStreams(seed)
    result = ps_select(
        lambda s: centralized_dsg_core(g, T, varsigma, seed=s, mode=mode, keep_transcript=False),
        gamma,
        streams,
        delta=delta,
    )
    result.extras.update(T=T, varsigma=varsigma)
    return result
