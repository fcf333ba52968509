"""
Privacy budgets, noise specifications, conversions and budget units.

zCDP is the internal currency. (epsilon, delta) only appears at API
boundaries through ``zcdp_to_epsdelta``. Every loop bound that also enters a
privacy ledger (repetitions, grid sizes, the weighted K and directed M) is
computed here and read by both the accountant and the algorithms.
"""
import math
from dataclasses import dataclass
from typing import List, Optional

from scipy.optimize import minimize_scalar

from ..graph.graphs import lift_costs, log_ceil
from ..utils.error_handler import InfeasiblePrivacyError, InvalidArgumentError

NOISE_KINDS = ("gaussian", "geometric", "laplace")

LEDP_VARIANTS = ("ledp", "weighted", "directed")
CENTRAL_VARIANTS = {"centralized": 6.0, "centralized-weighted": 6.0, "centralized-directed": 8.0}


@dataclass(frozen=True)
class PrivacyBudget:
    """A zCDP budget; ``inf`` marks zero-noise (non-private) runs."""

    zcdp_budget: float = 0.0

    def __post_init__(self):
        if not self.zcdp_budget >= 0:
            raise InvalidArgumentError(f"zCDP budget must be nonnegative, got {self.zcdp_budget}")

    def __add__(self, other: "PrivacyBudget") -> "PrivacyBudget":
        return PrivacyBudget(self.zcdp_budget + other.zcdp_budget)

    @property
    def non_private(self) -> bool:
        return math.isinf(self.zcdp_budget)

    def to_eps(self, delta: float) -> float:
        return zcdp_to_epsdelta(self, delta)


@dataclass(frozen=True)
class EpsDelta:
    eps: float
    delta: float

    def __post_init__(self):
        if not self.eps > 0:
            raise InvalidArgumentError(f"eps must be positive, got {self.eps}")
        _check_delta(self.delta)


@dataclass(frozen=True)
class NoiseSpec:
    """
    Noise attached to a local randomizer.

    ``scale`` is the standard deviation for gaussian noise, epsilon per unit
    sensitivity for geometric noise (Geom(e^scale)), and b for laplace noise.
    A zero gaussian/laplace scale, or an infinite geometric scale, is only
    accepted when ``zero_noise`` is set.
    """

    kind: str
    scale: float
    zero_noise: bool = False

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise InvalidArgumentError(f"unknown noise kind {self.kind!r}; expected one of {NOISE_KINDS}")
        if self.is_noiseless:
            if not self.zero_noise:
                raise InvalidArgumentError(f"{self.kind} noise with scale {self.scale} requires zero-noise mode")
        elif not self.scale > 0:
            raise InvalidArgumentError(f"noise scale must be positive, got {self.scale}")

    @property
    def is_noiseless(self) -> bool:
        if self.kind == "geometric":
            return math.isinf(self.scale)
        return self.scale == 0

    @classmethod
    def gaussian(cls, std: float) -> "NoiseSpec":
        return cls("gaussian", float(std), zero_noise=std == 0)

    @classmethod
    def geometric(cls, eps: float) -> "NoiseSpec":
        return cls("geometric", float(eps), zero_noise=math.isinf(eps))


def _check_delta(delta: float) -> None:
    if not 0 < delta < 1:
        raise InvalidArgumentError(f"delta must lie in (0, 1), got {delta}")


def zcdp_to_epsdelta(budget: PrivacyBudget, delta: float, alpha: Optional[float] = None) -> float:
    """
    Convert a zCDP budget to epsilon at the given delta through the RDP route.

    For a fixed order alpha > 1 this is rho*alpha + ln(1/delta)/(alpha - 1).
    Without ``alpha`` the minimizing order 1 + sqrt(ln(1/delta)/rho) is used,
    giving rho + 2*sqrt(rho*ln(1/delta)).
    """
    _check_delta(delta)
    rho = budget.zcdp_budget
    log_term = math.log(1.0 / delta)
    if alpha is not None:
        if not alpha > 1:
            raise InvalidArgumentError(f"RDP order alpha must exceed 1, got {alpha}")
        return rho * alpha + log_term / (alpha - 1.0)
    return rho + 2.0 * math.sqrt(rho * log_term)


def zcdp_to_epsdelta_numeric(budget: PrivacyBudget, delta: float) -> float:
    """Numerically minimize rho*alpha + ln(1/delta)/(alpha - 1) over alpha > 1."""
    _check_delta(delta)
    rho = budget.zcdp_budget
    if rho <= 0:
        raise InvalidArgumentError("numeric conversion needs a positive budget")
    log_term = math.log(1.0 / delta)
    upper = 1.0 + 100.0 * math.sqrt(log_term / rho) + 100.0
    result = minimize_scalar(
        lambda a: rho * a + log_term / (a - 1.0),
        bounds=(1.0 + 1e-12, upper),
        method="bounded",
        options={"xatol": 1e-12, "maxiter": 10_000},
    )
    return float(result.fun)


# ---------------------------------------------------------------- budget units

def repetitions(n: int, c: float) -> int:
    """Independent repetitions ceil(c * log2 n), at least one."""
    if n < 2:
        return 1
    return max(1, int(math.ceil(c * math.log2(n) - 1e-9)))


def lambda_grid_size(n: int, c_max: float, beta: float) -> int:
    """Points of the geometric density grid: ceil(log_{1+beta}(2 C_max n)) + 1."""
    if not beta > 0:
        raise InvalidArgumentError(f"grid slack beta must be positive, got {beta}")
    return log_ceil(2.0 * float(c_max) * n, 1.0 + beta) + 1


def weighted_units(n: int, c: float, beta: float, c_max: float) -> int:
    """K: weighted MWU + peeling runs, each costing 1/varsigma^2."""
    return repetitions(n, c) * lambda_grid_size(n, c_max, beta)


def t_grid_size(n: int, beta: float) -> int:
    """Scales in the directed grid: ceil(log_{1+beta} n) + 1."""
    if not beta > 0:
        raise InvalidArgumentError(f"grid slack beta must be positive, got {beta}")
    return log_ceil(n, 1.0 + beta) + 1


def t_grid(n: int, beta: float) -> List[float]:
    """Directed scale grid t_i = (1+beta)^i / sqrt(n), i = 0..ceil(log_{1+beta} n)."""
    return [(1.0 + beta) ** i / math.sqrt(n) for i in range(t_grid_size(n, beta))]


def lift_c_max(t: float) -> float:
    _, left, right = lift_costs(t)
    return float(max(left, right))


def directed_units(n: int, c: float, beta: float) -> int:
    """
    M: the exact number of 1/varsigma^2 units spent by the directed pipeline.

    Per grid scale t_i: the weighted pipeline on the 2n-vertex lift (its own K)
    plus one cross-degree query (two-cover Gaussian, one unit).
    """
    return sum(weighted_units(2 * n, c, beta, lift_c_max(t)) + 1 for t in t_grid(n, beta))


def arithmetic_spacing(n: int, tau: float, T: int) -> float:
    """L = 4 (n + tau) sqrt(ln n / T)."""
    return 4.0 * (n + tau) * math.sqrt(math.log(n) / T)


def arithmetic_grid_size(n: int, c_max: float, tau: float, T: int) -> int:
    """N = ceil(2 C_max n / L) for the centralized weighted guess."""
    return max(1, int(math.ceil(2.0 * float(c_max) * n / arithmetic_spacing(n, tau, T))))


def directed_arithmetic_grid_size(n: int, tau: float, T: int) -> int:
    """N = ceil(2 n^2 / L) for the centralized directed guess."""
    return max(1, int(math.ceil(2.0 * n * n / arithmetic_spacing(n, tau, T))))


def ps_select_epsilon(rho: float, gamma: float, delta: float) -> float:
    """Epsilon of the repeated-selection wrapper: 6 sqrt(rho ln(1/(gamma delta)))."""
    _check_delta(delta)
    if not 0 < gamma < 1:
        raise InvalidArgumentError(f"gamma must lie in (0, 1), got {gamma}")
    return 6.0 * math.sqrt(rho * math.log(1.0 / (gamma * delta)))


def sigma_for_target(
    eps: float,
    delta: float,
    n: int,
    c: float = 1.0,
    variant: str = "ledp",
    beta: float = 0.1,
    c_max: float = 1.0,
) -> float:
    """
    Per-round Gaussian scale varsigma meeting an (eps, delta) target.

    Args:
        eps: Target epsilon
        delta: Target delta
        n: Vertex count (n >= 2)
        c: Repetition / failure-probability constant
        variant: ledp, weighted, directed, centralized, centralized-weighted
            or centralized-directed
        beta: Grid slack for the weighted and directed variants
        c_max: Maximum node cost for the weighted variant

    Returns:
        varsigma
    """
    _check_delta(delta)
    if not eps > 0:
        raise InfeasiblePrivacyError(f"eps must be positive, got {eps}")
    if n < 2:
        raise InvalidArgumentError(f"need at least two vertices, got n={n}")
    log_term = math.log(1.0 / delta)
    if variant in LEDP_VARIANTS:
        if eps >= 8.0 * log_term:
            raise InfeasiblePrivacyError(
                f"eps={eps} violates the hypothesis eps < 8 ln(1/delta) = {8.0 * log_term:.4f}"
            )
        if variant == "ledp":
            units = repetitions(n, c)
        elif variant == "weighted":
            units = weighted_units(n, c, beta, c_max)
        else:
            units = directed_units(n, c, beta)
        return 4.0 * math.sqrt(units * log_term) / eps
    if variant in CENTRAL_VARIANTS:
        return CENTRAL_VARIANTS[variant] * math.sqrt(c * math.log(n) + log_term) / eps
    raise InvalidArgumentError(f"unknown privacy variant {variant!r}")
