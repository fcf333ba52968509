"""
zCDP accountant: a single-writer ledger of mechanism invocations per protocol run.
"""
import json
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple

from ..utils.error_handler import InvalidArgumentError
from ..utils.logger import get_logger
from .budget import NoiseSpec, PrivacyBudget, zcdp_to_epsdelta

logger = get_logger(__name__)

DISJOINTNESS = ("strict", "two-cover")


def compose_sequential(budgets: Iterable[PrivacyBudget]) -> PrivacyBudget:
    return PrivacyBudget(math.fsum(b.zcdp_budget for b in budgets))


def compose_parallel(budgets: Iterable[PrivacyBudget], disjointness: str = "strict") -> PrivacyBudget:
    """
    Parallel composition over parts of the input.

    ``strict``: every edge lives in one part (max). ``two-cover``: every edge
    lives in at most two parts, as with per-node degree queries (2 x max).
    """
    if disjointness not in DISJOINTNESS:
        raise InvalidArgumentError(f"unknown disjointness {disjointness!r}")
    worst = max((b.zcdp_budget for b in budgets), default=0.0)
    return PrivacyBudget(worst if disjointness == "strict" else 2.0 * worst)


def mechanism_cost(noise: NoiseSpec, sensitivity: float, disjointness: str = "strict") -> Tuple[float, Optional[float]]:
    """
    Cost of one round in which every queried party runs the same randomizer.

    Returns:
        (zCDP cost, pure epsilon or None for gaussian noise)
    """
    if disjointness not in DISJOINTNESS:
        raise InvalidArgumentError(f"unknown disjointness {disjointness!r}")
    factor = 1.0 if disjointness == "strict" else 2.0
    if noise.is_noiseless:
        return math.inf, (math.inf if noise.kind != "gaussian" else None)
    if noise.kind == "gaussian":
        return factor * sensitivity ** 2 / (2.0 * noise.scale ** 2), None
    if noise.kind == "geometric":
        pure = factor * sensitivity * noise.scale
    else:
        pure = factor * sensitivity / noise.scale
    return pure * pure / 2.0, pure


@dataclass(frozen=True)
class LedgerEntry:
    round: int
    mechanism: str
    sensitivity: float
    scale: float
    zcdp_cost: float
    noise: str = "gaussian"
    disjointness: str = "strict"
    pure_eps: Optional[float] = None


class PrivacyAccountant:
    """Append-only ledger of declared per-round costs."""

    def __init__(self, label: str = ""):
        self.label = label
        self.entries: List[LedgerEntry] = []

    def record(
        self,
        mechanism: str,
        noise: NoiseSpec,
        sensitivity: float = 1.0,
        disjointness: str = "strict",
        round_index: Optional[int] = None,
    ) -> LedgerEntry:
        zcdp_cost, pure_eps = mechanism_cost(noise, sensitivity, disjointness)
        entry = LedgerEntry(
            round=len(self.entries) + 1 if round_index is None else round_index,
            mechanism=mechanism,
            sensitivity=float(sensitivity),
            scale=float(noise.scale),
            zcdp_cost=zcdp_cost,
            noise=noise.kind,
            disjointness=disjointness,
            pure_eps=pure_eps,
        )
        self.entries.append(entry)
        return entry

    def extend(self, other: "PrivacyAccountant") -> None:
        """Sequentially compose another run's ledger into this one."""
        offset = len(self.entries)
        for entry in other.entries:
            self.entries.append(LedgerEntry(**{**asdict(entry), "round": entry.round + offset}))

    @property
    def total(self) -> PrivacyBudget:
        return compose_sequential(PrivacyBudget(e.zcdp_cost) for e in self.entries)

    @property
    def total_pure_eps(self) -> Optional[float]:
        """Sum of pure epsilons, or None when any entry is gaussian."""
        if any(e.pure_eps is None for e in self.entries):
            return None
        return math.fsum(e.pure_eps for e in self.entries)

    def costs_by_mechanism(self) -> Dict[str, float]:
        totals: Dict[str, List[float]] = {}
        for e in self.entries:
            totals.setdefault(e.mechanism, []).append(e.zcdp_cost)
        return {name: math.fsum(costs) for name, costs in totals.items()}

    def to_dict(self, delta: Optional[float] = None) -> Dict[str, Any]:
        total = self.total
        report: Dict[str, Any] = {
            "label": self.label,
            "entries": [asdict(e) for e in self.entries],
            "zcdp_total": total.zcdp_budget,
            "pure_eps_total": self.total_pure_eps,
        }
        if delta is not None and not total.non_private:
            report["delta"] = delta
            report["eps_at_delta"] = zcdp_to_epsdelta(total, delta)
        return report

    def to_json(self, delta: Optional[float] = None) -> str:
        return json.dumps(self.to_dict(delta), indent=2)

    def __len__(self) -> int:
        return len(self.entries)
