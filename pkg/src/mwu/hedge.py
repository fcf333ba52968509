"""
Hedge over n experts with arbitrary (possibly noisy, unbounded) losses.

Weights live in the log domain: T can reach n^2 / varsigma^2 rounds, far past
the point where raw exponential weights underflow.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..graph.graphs import Ordering
from ..privacy.accountant import PrivacyAccountant
from ..privacy.budget import NoiseSpec
from ..privacy.samplers import gaussian_sample
from ..utils.error_handler import InvalidArgumentError


class HedgeState:
    """
    Exponential-weights learner with fixed step eta = sqrt(ln n / T).

    Args:
        n: Number of experts
        horizon: Number of rounds T
    """

    def __init__(self, n: int, horizon: int):
        if n < 1:
            raise InvalidArgumentError(f"Hedge needs at least one expert, got n={n}")
        if horizon < 1:
            raise InvalidArgumentError(f"Hedge horizon must be positive, got T={horizon}")
        self.n = n
        self.horizon = horizon
        self.hedge_step = math.sqrt(math.log(n) / horizon)
        self.log_weights = np.zeros(n)
        self.t = 1

    def distribution(self) -> np.ndarray:
        shifted = np.exp(self.log_weights - self.log_weights.max())
        return shifted / shifted.sum()

    def update(self, losses: np.ndarray) -> "HedgeState":
        if self.t >= self.horizon:
            raise InvalidArgumentError(f"Hedge horizon T={self.horizon} exhausted")
        losses = np.asarray(losses, dtype=np.float64)
        if losses.shape != (self.n,):
            raise InvalidArgumentError(f"expected {self.n} losses, got shape {losses.shape}")
        if not np.isfinite(losses).all():
            raise InvalidArgumentError("losses must be finite")
        self.log_weights -= self.hedge_step * losses
        self.t += 1
        return self

    def ordering(self, log_costs: Optional[np.ndarray] = None) -> Ordering:
        """Experts in nonincreasing order of p_v (or p_v / c_v), ascending id on ties."""
        scores = self.log_weights if log_costs is None else self.log_weights - log_costs
        return Ordering.by_scores_desc(scores)


def hedge_distribution(state: HedgeState) -> np.ndarray:
    return state.distribution()


def hedge_update(state: HedgeState, losses: np.ndarray) -> HedgeState:
    return state.update(losses)


@dataclass(frozen=True)
class RegretReport:
    algorithm_loss: float
    best_expert_loss: float

    @property
    def regret(self) -> float:
        return self.algorithm_loss - self.best_expert_loss


def regret_report(losses: np.ndarray, distributions: np.ndarray) -> RegretReport:
    """
    Regret of a distribution sequence against the best fixed expert.

    Args:
        losses: (T, n) loss vectors, ideally the mean (noise-free) losses
        distributions: (T, n) distributions played

    Returns:
        RegretReport
    """
    losses = np.asarray(losses, dtype=np.float64)
    distributions = np.asarray(distributions, dtype=np.float64)
    if losses.shape != distributions.shape:
        raise InvalidArgumentError(
            f"loss history {losses.shape} and distribution history {distributions.shape} are not aligned"
        )
    return RegretReport(
        algorithm_loss=float(np.einsum("ti,ti->", losses, distributions)),
        best_expert_loss=float(losses.sum(axis=0).min()),
    )


def run_noisy_hedge(
    mean_losses: np.ndarray,
    nu: float,
    rng: np.random.Generator,
    accountant: Optional[PrivacyAccountant] = None,
    sensitivity: float = 1.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    DP-Hedge: play Hedge on mean losses perturbed by N(0, nu^2) each round.

    Each round is recorded in ``accountant`` as a Gaussian release with the
    declared l2 sensitivity.

    Returns:
        (distributions played, noisy losses fed), both (T, n)
    """
    mean_losses = np.asarray(mean_losses, dtype=np.float64)
    T, n = mean_losses.shape
    state = HedgeState(n, T)
    distributions = np.empty((T, n))
    noisy = np.empty((T, n))
    noise = NoiseSpec.gaussian(nu)
    for t in range(T):
        distributions[t] = state.distribution()
        noisy[t] = mean_losses[t] + gaussian_sample(rng, nu, size=n)
        if accountant is not None:
            accountant.record("dp_hedge", noise, sensitivity=sensitivity)
        if t < T - 1:
            state.update(noisy[t])
    return distributions, noisy
