"""
On-disk cache of exact oracle results keyed by graph content hash.
"""
import json
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

from ..config import ORACLE_CACHE_PATH
from ..graph.graphs import DirectedGraph, Graph, NodeWeightedGraph
from ..utils.logger import get_logger
from .baselines import DirectedOracleResult, OracleResult

logger = get_logger(__name__)

AnyGraph = Union[Graph, NodeWeightedGraph, DirectedGraph]
AnyResult = Union[OracleResult, DirectedOracleResult]


class OracleCache:
    """JSON file mapping sha256(graph) to the exact optimum and an optimal set."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else ORACLE_CACHE_PATH
        self.entries = self._load_entries()

    def _load_entries(self) -> Dict[str, Any]:
        if self.path.exists():
            try:
                with open(self.path, "r", encoding="utf-8") as f:
                    return json.load(f)
            except Exception as e:
                logger.error(f"Error loading oracle cache {self.path}: {e}")
        return {}

    def _save_entries(self) -> None:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "w", encoding="utf-8") as f:
                json.dump(self.entries, f, indent=2, sort_keys=True)
        except Exception as e:
            logger.error(f"Error saving oracle cache {self.path}: {e}")

    def get(self, g: AnyGraph) -> Optional[AnyResult]:
        entry = self.entries.get(g.content_hash())
        if entry is None:
            logger.debug(f"Oracle cache miss for {g!r}")
            return None
        logger.debug(f"Oracle cache hit for {g!r}")
        if entry["kind"] == "directed":
            return DirectedOracleResult(
                sources=frozenset(entry["sources"]),
                targets=frozenset(entry["targets"]),
                density_squared=Fraction(entry["density_squared"]),
                method=entry["method"],
            )
        return OracleResult(frozenset(entry["vertices"]), Fraction(entry["density"]), entry["method"])

    def put(self, g: AnyGraph, result: AnyResult) -> None:
        entry: Dict[str, Any] = {"method": result.method, "updated": datetime.now().isoformat()}
        if isinstance(result, DirectedOracleResult):
            entry.update(
                kind="directed",
                sources=sorted(result.sources),
                targets=sorted(result.targets),
                density_squared=str(result.density_squared),
            )
        else:
            entry.update(kind="undirected", vertices=sorted(result.vertices), density=str(result.density))
        self.entries[g.content_hash()] = entry
        self._save_entries()
        logger.info(f"Cached oracle result for {g!r}")

    def lookup_or_compute(self, g: AnyGraph, compute: Callable[[AnyGraph], AnyResult]) -> AnyResult:
        cached = self.get(g)
        if cached is not None:
            return cached
        result = compute(g)
        self.put(g, result)
        return result
