"""
Pure epsilon-LEDP parallel peeling with two-sided geometric noise.

Each round every survivor reports its remaining degree plus Geom(e^eps)
noise; the curator removes every survivor whose (nonnegative part of the)
noisy degree is at most (1 + eta) times the average, and keeps the round
whose noisy density estimate is largest.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Union

import numpy as np

from ..graph.graphs import Graph
from ..ledp.randomizers import MaskedDegreeRandomizer
from ..ledp.runtime import Curator, run_protocol
from ..privacy.budget import NoiseSpec
from ..privacy.samplers import RngStreams
from ..utils.error_handler import InvalidArgumentError, ProtocolError
from ..utils.logger import get_logger
from .results import DensityResult

logger = get_logger(__name__)

NOISY_DEGREE = "noisy_degree"


@dataclass
class PeelRound:
    survivors: frozenset
    noisy_degrees: np.ndarray
    estimate: float
    threshold: Fraction
    removed: frozenset


@dataclass
class PurePeelOutcome:
    vertices: frozenset
    estimate: float
    rounds: List[PeelRound] = field(default_factory=list)


def eps_per_round_for_total(eps_total: float, eta: float, n: int) -> float:
    """eps' = eps * eta / ln n, the per-round setting for a total target eps."""
    if not eps_total > 0 or not eta > 0:
        raise InvalidArgumentError("eps and eta must be positive")
    return eps_total * eta / math.log(max(n, 2))


def round_bound(n: int, eta: float) -> int:
    """Maximum number of peeling rounds: max(1, ceil(log_{1+eta} n))."""
    if n <= 1:
        return 1
    return max(1, int(math.ceil(math.log(n) / math.log1p(eta) - 1e-9)))


def _slack_fraction(eta: float) -> Fraction:
    return 1 + Fraction(repr(float(eta)))


def simple_pure_ledp_protocol(curator: Curator, eps_per_round: float, eta: float) -> PurePeelOutcome:
    if not eps_per_round > 0:
        raise InvalidArgumentError(f"eps_per_round must be positive, got {eps_per_round}")
    if not eta > 0:
        raise InvalidArgumentError(f"eta must be positive, got {eta}")
    slack = _slack_fraction(eta)
    randomizer = MaskedDegreeRandomizer(NoiseSpec.geometric(eps_per_round), topic="survivors", name=NOISY_DEGREE)
    alive = np.ones(curator.n, dtype=bool)
    rounds: List[PeelRound] = []
    while alive.any():
        index = len(rounds)
        curator.broadcast("survivors", alive)
        parties = np.flatnonzero(alive)
        noisy = np.rint(curator.collect(randomizer, parties=parties, key=("round", index))).astype(np.int64)
        size = parties.size
        estimate = float(noisy.sum()) / (2.0 * size)
        clipped = np.maximum(noisy, 0)
        total = int(clipped.sum())
        # D_v <= (1 + eta) * mean(D)  <=>  D_v * |S| * den <= num * sum(D)
        removed_mask = clipped * size * slack.denominator <= slack.numerator * total
        if not removed_mask.any():
            raise ProtocolError("no vertex fell below the peeling threshold")
        removed = parties[removed_mask]
        rounds.append(PeelRound(
            survivors=frozenset(int(v) for v in parties),
            noisy_degrees=noisy,
            estimate=estimate,
            threshold=slack * Fraction(total, size),
            removed=frozenset(int(v) for v in removed),
        ))
        curator.note("round", {"round": index, "estimate": estimate, "removed": removed})
        alive[removed] = False
    estimates = np.array([r.estimate for r in rounds])
    best = int(np.argmax(estimates))
    curator.note("select", {"candidate": best, "estimate": float(estimates[best])})
    return PurePeelOutcome(vertices=rounds[best].survivors, estimate=rounds[best].estimate, rounds=rounds)


def simple_pure_ledp(
    g: Graph,
    eps_per_round: float,
    eta: float,
    seed: Union[int, RngStreams] = 0,
    mode: str = "local",
    keep_transcript: bool = True,
) -> DensityResult:
    """
    Pure epsilon-LEDP peeling.

    The result's ``eps`` is the total pure epsilon 2 * eps_per_round * rounds;
    its budget is the implied zCDP cost. ``extras["peel_rounds"]`` holds the
    per-round records.
    """
    run = run_protocol(
        g,
        lambda cur: simple_pure_ledp_protocol(cur, eps_per_round, eta),
        seed,
        mode=mode,
        keep_transcript=keep_transcript,
    )
    outcome: PurePeelOutcome = run.output
    total_eps = run.accountant.total_pure_eps
    if len(outcome.rounds) > round_bound(g.n, eta):
        logger.warning(f"pure peeling used {len(outcome.rounds)} rounds, above the bound {round_bound(g.n, eta)}")
    return DensityResult(
        vertices=outcome.vertices,
        noisy_density=outcome.estimate,
        budget=run.budget,
        rounds=run.rounds,
        transcript=run.transcript if keep_transcript else None,
        accountant=run.accountant,
        eps=total_eps,
        extras={"peel_rounds": outcome.rounds, "eta": eta, "eps_per_round": eps_per_round},
    )
