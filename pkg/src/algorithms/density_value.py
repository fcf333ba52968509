"""
Private release of the density value rho(G).

rho_x(G) = max(rho(G), x) has edge sensitivity at most 1/(2x - 1) for x > 1/2,
so the Laplace mechanism on it with scale 1/((2x - 1) eps) is eps-DP. This is
a trusted-curator mechanism: it needs the exact rho(G).
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .. import config
from ..graph.generators import gnp
from ..graph.graphs import Graph
from ..oracle.baselines import exact_dsg_flow
from ..privacy.accountant import PrivacyAccountant
from ..privacy.budget import NoiseSpec
from ..privacy.samplers import RngStreams, laplace_sample
from ..utils.error_handler import InvalidArgumentError, OracleLimitError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MODES = ("whp", "expectation")
MIN_CLAMP = 0.51


@dataclass(frozen=True)
class ClampedDensity:
    x: float
    rho_x: float

    def __post_init__(self):
        if not self.x > 0.5:
            raise InvalidArgumentError(f"clamp level must exceed 1/2, got {self.x}")

    @property
    def sensitivity(self) -> float:
        return 1.0 / (2.0 * self.x - 1.0)


def rho_x(rho, x):
    return max(rho, x)


def clamp_level(n: int, eps: float, mode: str = "whp") -> float:
    """x = sqrt(ln n / eps) (whp) or sqrt(1 / eps) (expectation), floored at 0.51."""
    if mode not in MODES:
        raise InvalidArgumentError(f"unknown mode {mode!r}; expected one of {MODES}")
    if not eps > 0:
        raise InvalidArgumentError(f"eps must be positive, got {eps}")
    numerator = math.log(max(n, 2)) if mode == "whp" else 1.0
    return max(MIN_CLAMP, math.sqrt(numerator / eps))


def _exact_density(g: Graph) -> Fraction:
    if g.n > config.FLOW_LIMIT:
        raise OracleLimitError(
            f"n={g.n} exceeds the exact oracle limit {config.FLOW_LIMIT}; pass rho (the exact density) explicitly"
        )
    return exact_dsg_flow(g).density


def private_density_value(
    g: Graph,
    eps: float,
    mode: str = "whp",
    rho: Optional[Union[float, Fraction]] = None,
    seed: Union[int, np.random.Generator] = 0,
    accountant: Optional[PrivacyAccountant] = None,
) -> float:
    """
    rho_x(G) + Lap(1 / ((2x - 1) eps)).

    Args:
        g: Private graph (nonempty)
        eps: Privacy parameter (inf gives the noiseless value)
        mode: "whp" or "expectation" clamp level
        rho: Exact rho(G) when already known
        seed: Seed or generator for the Laplace draw
        accountant: Optional ledger receiving the release
    """
    if g.n == 0:
        raise InvalidArgumentError("graph has no vertices")
    x = clamp_level(g.n, eps, mode)
    rho = _exact_density(g) if rho is None else rho
    clamped = ClampedDensity(x=x, rho_x=float(rho_x(rho, x)))
    scale = clamped.sensitivity / eps
    rng = seed if isinstance(seed, np.random.Generator) else RngStreams(seed).generator("density_value")
    if accountant is not None:
        accountant.record("density_value", NoiseSpec("laplace", scale, zero_noise=scale == 0),
                          sensitivity=clamped.sensitivity)
    return clamped.rho_x + float(laplace_sample(rng, scale))


@dataclass
class SensitivityReport:
    n_max: int
    pairs_checked: int = 0
    max_difference: Dict[float, Fraction] = field(default_factory=dict)
    violations: List[Tuple[int, int, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _all_densities(n: int) -> Tuple[List[Fraction], int]:
    """rho(G) for every graph on vertex set 0..n-1, indexed by edge bitmask."""
    pairs = list(combinations(range(n), 2))
    inside = []
    for s in range(1, 1 << n):
        bits = 0
        for j, (u, v) in enumerate(pairs):
            if s >> u & 1 and s >> v & 1:
                bits |= 1 << j
        inside.append((bits, bin(s).count("1")))
    densities = []
    for edge_mask in range(1 << len(pairs)):
        best_e, best_size = 0, 1
        for bits, size in inside:
            e = bin(edge_mask & bits).count("1")
            if e * best_size > best_e * size:
                best_e, best_size = e, size
        densities.append(Fraction(best_e, best_size))
    return densities, len(pairs)


def rho_x_sensitivity_check(n_max: int, xs: Sequence[float] = (1.0, 1.5, 2.0)) -> SensitivityReport:
    """
    Check |rho_x(G) - rho_x(G')| <= 1/(2x - 1) over every graph on at most
    ``n_max`` vertices and every graph differing from it in one edge.
    """
    if n_max > 6:
        raise InvalidArgumentError(f"exhaustive enumeration supports n_max <= 6, got {n_max}")
    report = SensitivityReport(n_max=n_max, max_difference={float(x): Fraction(0) for x in xs})
    levels = [(float(x), Fraction(x), 1 / (2 * Fraction(x) - 1)) for x in xs]
    for n in range(2, n_max + 1):
        densities, pair_count = _all_densities(n)
        for edge_mask, rho in enumerate(densities):
            for j in range(pair_count):
                if edge_mask >> j & 1:
                    continue
                neighbor = densities[edge_mask | 1 << j]
                report.pairs_checked += 1
                for key, x, bound in levels:
                    diff = abs(rho_x(rho, x) - rho_x(neighbor, x))
                    if diff > report.max_difference[key]:
                        report.max_difference[key] = diff
                    if diff > bound:
                        report.violations.append((n, edge_mask, key))
    logger.info(f"sensitivity check n<={n_max}: {report.pairs_checked} pairs, {len(report.violations)} violations")
    return report


def separation_report(
    ns: Sequence[int] = (50, 100, 200),
    eps: float = 1.0,
    trials: int = 200,
    p: float = 0.1,
    seed: int = 0,
) -> pd.DataFrame:
    """
    Descriptive comparison of the value mechanism's mean error against the
    structural scale sqrt(ln n / eps) on G(n, p) graphs.
    """
    rows = []
    streams = RngStreams(seed)
    for n in ns:
        g = gnp(n, p, seed=seed + n)
        rho = _exact_density(g)
        for mode in MODES:
            rng = streams.generator("separation", n, mode)
            errors = [abs(private_density_value(g, eps, mode, rho=rho, seed=rng) - float(rho)) for _ in range(trials)]
            scale = math.sqrt(math.log(n) / eps)
            rows.append({
                "n": n,
                "eps": eps,
                "mode": mode,
                "rho": float(rho),
                "mean_abs_error": float(np.mean(errors)),
                "structural_scale": scale,
                "below_structural_scale": float(np.mean(errors)) < scale,
            })
    return pd.DataFrame(rows)
