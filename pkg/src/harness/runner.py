"""
Experiment runner: parameter resolution, trial dispatch, result rows and
transcript export.
"""
import json
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TextIO, Tuple, Union

import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from .. import config
from ..algorithms.density_value import private_density_value
from ..algorithms.dsg_directed import (
    centralized_directed_dsg,
    directed_dsg_ledp,
    directed_dsg_ledp_protocol,
)
from ..algorithms.dsg_private import centralized_dsg, default_T, dsg_ledp, dsg_ledp_protocol
from ..algorithms.dsg_weighted import (
    centralized_weighted_dsg,
    weighted_dsg_ledp,
    weighted_dsg_ledp_protocol,
)
from ..algorithms.pure_peel import eps_per_round_for_total, simple_pure_ledp, simple_pure_ledp_protocol
from ..graph.graphs import DirectedGraph, Graph, NodeWeightedGraph
from ..ledp.runtime import replay
from ..ledp.transcript import Transcript
from ..oracle.baselines import DirectedOracleResult, exact_dsg
from ..oracle.cache import OracleCache
from ..privacy.budget import sigma_for_target, zcdp_to_epsdelta
from ..privacy.samplers import RngStreams
from ..utils.error_handler import InvalidArgumentError, OracleLimitError, safe_execute
from ..utils.logger import get_logger

logger = get_logger(__name__)

ALGORITHMS = (
    "ledp",
    "centralized",
    "weighted",
    "centralized-weighted",
    "directed",
    "centralized-directed",
    "pure",
    "value",
    "oracle",
)
GRAPH_KINDS = {
    "weighted": "weighted",
    "centralized-weighted": "weighted",
    "directed": "directed",
    "centralized-directed": "directed",
}
REPLAYABLE = ("ledp", "weighted", "directed", "pure")
SIGMA_OVERRIDABLE = ("ledp", "weighted", "directed")
NON_PRIVATE_HEADER = "NON-PRIVATE EVALUATION"

AnyGraph = Union[Graph, NodeWeightedGraph, DirectedGraph]


def graph_kind(algo: str) -> str:
    return GRAPH_KINDS.get(algo, "undirected")


@dataclass
class RunSettings:
    """Resolved parameters of one ``run`` invocation."""

    algo: str
    eps: Optional[float] = None
    delta: float = config.DEFAULT_DELTA
    c: float = config.DEFAULT_C
    beta: float = config.DEFAULT_BETA
    eta: float = config.DEFAULT_ETA
    T: Optional[int] = None
    sigma: Optional[float] = None
    zero_noise: bool = False
    trials: int = 1
    seed: int = 0
    value_mode: str = "whp"
    runtime_mode: str = "local"
    reveal_truth: bool = False
    reference_density: Optional[float] = None
    T_cap: int = config.T_CAP
    n_jobs: int = config.N_JOBS
    transcript: Optional[str] = None

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise InvalidArgumentError(f"unknown algorithm {self.algo!r}; expected one of {ALGORITHMS}")
        if self.trials < 1:
            raise InvalidArgumentError(f"--trials must be positive, got {self.trials}")
        if self.algo == "oracle":
            return
        if self.zero_noise:
            if self.algo.startswith("centralized"):
                raise InvalidArgumentError("zero-noise mode is not available for the centralized pipelines")
            if self.algo not in ("pure", "value") and self.T is None:
                raise InvalidArgumentError("zero-noise runs need an explicit --T")
        elif self.eps is None and (self.sigma is None or self.algo not in SIGMA_OVERRIDABLE):
            raise InvalidArgumentError(f"--eps is required for --algo {self.algo}")
        if self.eps is not None and not self.eps > 0:
            raise InvalidArgumentError(f"--eps must be positive, got {self.eps}")


@dataclass
class Plan:
    """Parameters derived from the settings and the public graph size."""

    varsigma: Optional[float] = None
    T: Optional[int] = None
    eps_per_round: Optional[float] = None
    params: Dict[str, Any] = field(default_factory=dict)


def plan_parameters(settings: RunSettings, g: AnyGraph) -> Plan:
    """
    Resolve varsigma and T for the requested algorithm.

    Raises:
        InfeasiblePrivacyError: (eps, delta) outside the variant's admissible range
    """
    algo, n = settings.algo, g.n
    plan = Plan()
    if algo in ("oracle", "value"):
        plan.params = {"mode": settings.value_mode} if algo == "value" else {}
        return plan
    if algo == "pure":
        plan.eps_per_round = math.inf if settings.zero_noise else eps_per_round_for_total(settings.eps, settings.eta, n)
        plan.params = {"eta": settings.eta, "eps_per_round": plan.eps_per_round}
        return plan
    if settings.zero_noise:
        plan.varsigma = 0.0
    elif settings.sigma is not None:
        plan.varsigma = float(settings.sigma)
    else:
        variant = "ledp" if algo == "ledp" else algo
        c_max = float(g.c_max) if isinstance(g, NodeWeightedGraph) else 1.0
        plan.varsigma = sigma_for_target(settings.eps, settings.delta, n, c=settings.c, variant=variant,
                                         beta=settings.beta, c_max=c_max)
    plan.T = settings.T if settings.T is not None else default_T(n, plan.varsigma, cap=settings.T_cap)
    plan.params = {"T": plan.T, "varsigma": plan.varsigma, "c": settings.c}
    if algo in ("weighted", "directed"):
        plan.params["beta"] = settings.beta
    return plan


def trial_seed(root_seed: int, trial: int) -> int:
    return int(RngStreams(root_seed).generator("trial", trial).integers(2 ** 31))


def _run_algorithm(settings: RunSettings, plan: Plan, g: AnyGraph, seed: int, keep_transcript: bool,
                   rho: Optional[Fraction]):
    algo, streams = settings.algo, RngStreams(seed)
    mode = settings.runtime_mode
    if algo == "ledp":
        return dsg_ledp(g, plan.T, plan.varsigma, c=settings.c, seed=streams, mode=mode,
                        keep_transcript=keep_transcript)
    if algo == "weighted":
        return weighted_dsg_ledp(g, plan.T, plan.varsigma, c=settings.c, beta=settings.beta, seed=streams,
                                 mode=mode, keep_transcript=keep_transcript)
    if algo == "directed":
        return directed_dsg_ledp(g, plan.T, plan.varsigma, c=settings.c, beta=settings.beta, seed=streams,
                                 mode=mode, keep_transcript=keep_transcript)
    if algo == "pure":
        return simple_pure_ledp(g, plan.eps_per_round, settings.eta, seed=streams, mode=mode,
                                keep_transcript=keep_transcript)
    if algo == "centralized":
        return centralized_dsg(g, settings.eps, settings.delta, c=settings.c, seed=streams, T=plan.T,
                               varsigma=plan.varsigma)
    if algo == "centralized-weighted":
        return centralized_weighted_dsg(g, settings.eps, settings.delta, c=settings.c, seed=streams, T=plan.T,
                                        varsigma=plan.varsigma)
    if algo == "centralized-directed":
        return centralized_directed_dsg(g, settings.eps, settings.delta, c=settings.c, seed=streams, T=plan.T,
                                        varsigma=plan.varsigma)
    eps = math.inf if settings.zero_noise else settings.eps
    return private_density_value(g, eps, settings.value_mode, rho=rho, seed=streams.generator("value"))


def run_trial(
    settings: RunSettings,
    plan: Plan,
    g: AnyGraph,
    trial: int,
    lambda_star: Optional[Union[Fraction, float]] = None,
    rho: Optional[Fraction] = None,
) -> Tuple[Dict[str, Any], Optional[Transcript]]:
    """Run one trial and build its result row (and, for trial 0 on request, the transcript)."""
    seed = trial_seed(settings.seed, trial)
    keep = settings.transcript is not None and trial == 0 and settings.algo in REPLAYABLE
    start = time.perf_counter()
    try:
        result = _run_algorithm(settings, plan, g, seed, keep, rho)
    except Exception as e:
        logger.error(f"trial {trial} of {settings.algo} failed: {e}")
        raise
    wall_ms = (time.perf_counter() - start) * 1000.0

    row: Dict[str, Any] = {
        "algo": settings.algo,
        "n": g.n,
        "m": g.graph.m if isinstance(g, NodeWeightedGraph) else g.m,
        "eps": settings.eps,
        "delta": settings.delta,
        "params": json.dumps(plan.params, sort_keys=True),
        "seed": settings.seed,
        "trial": trial,
        "trial_seed": seed,
    }
    transcript = None
    if settings.algo == "value":
        eps = math.inf if settings.zero_noise else settings.eps
        row.update(noisy_density=float(result), set_size=None, rounds=0, zcdp_total=eps * eps / 2.0,
                   eps_at_delta=eps)
        true_value = float(rho) if rho is not None else None
    else:
        budget = result.budget
        eps_at_delta = result.eps
        if eps_at_delta is None and not budget.non_private:
            eps_at_delta = zcdp_to_epsdelta(budget, settings.delta)
        row.update(
            noisy_density=result.noisy_density,
            set_size=len(result.vertices),
            rounds=result.rounds,
            zcdp_total=budget.zcdp_budget,
            eps_at_delta=math.inf if eps_at_delta is None else eps_at_delta,
        )
        transcript = result.transcript if keep else None
        true_value = float(result.evaluate(g)) if settings.reveal_truth else None
    row["wall_ms"] = round(wall_ms, 3)
    row["lambda_ref"] = settings.reference_density
    if settings.reveal_truth:
        row["true_density"] = true_value
        row["lambda_star"] = None if lambda_star is None else float(lambda_star)
    return row, transcript


def exact_optimum(g: AnyGraph, use_cache: Optional[bool] = None):
    """Exact optimum through the oracle, cached on disk unless disabled."""
    use_cache = config.ENABLE_ORACLE_CACHE if use_cache is None else use_cache
    if use_cache:
        return OracleCache().lookup_or_compute(g, exact_dsg)
    return exact_dsg(g)


def compute_lambda_star(g: AnyGraph) -> Optional[Union[Fraction, float]]:
    """Best-effort lambda* for the evaluation columns; None when the oracle is out of reach."""
    result = safe_execute(exact_optimum, g, default_return=None, error_message="exact oracle unavailable",
                          expected=(OracleLimitError, OSError))
    return None if result is None else result.density


def oracle_row(g: AnyGraph, settings: RunSettings) -> Dict[str, Any]:
    start = time.perf_counter()
    result = exact_optimum(g)
    wall_ms = (time.perf_counter() - start) * 1000.0
    if isinstance(result, DirectedOracleResult):
        vertices, exact = result.sources | result.targets, result.density_squared
    else:
        vertices, exact = result.vertices, result.density
    return {
        "algo": "oracle",
        "n": g.n,
        "m": g.graph.m if isinstance(g, NodeWeightedGraph) else g.m,
        "method": result.method,
        "lambda_star": float(result.density),
        "lambda_star_exact": str(exact),
        "set_size": len(vertices),
        "seed": settings.seed,
        "trial": 0,
        "wall_ms": round(wall_ms, 3),
    }


def run_trials(g: AnyGraph, settings: RunSettings, progress: bool = True) -> Tuple[List[Dict[str, Any]], Plan]:
    """
    Run every trial; rows come back in trial order.

    Trials are independent given their derived seeds and run in a joblib
    worker pool of ``settings.n_jobs`` processes.
    """
    plan = plan_parameters(settings, g)
    if settings.algo == "oracle":
        return [oracle_row(g, settings)], plan
    logger.info(f"run {settings.algo}: n={g.n}, trials={settings.trials}, params={plan.params}")
    lambda_star = None
    if settings.reveal_truth:
        logger.warning("revealing non-private evaluation columns (true density, lambda*)")
        lambda_star = compute_lambda_star(g)
    rho = exact_optimum(g).density if settings.algo == "value" else None

    trials = tqdm(range(settings.trials), desc=f"{settings.algo} trials", disable=not progress)
    outputs = Parallel(n_jobs=settings.n_jobs)(
        delayed(run_trial)(settings, plan, g, trial, lambda_star, rho) for trial in trials
    )
    rows = [row for row, _ in outputs]
    transcript = outputs[0][1]
    if settings.transcript is not None:
        if transcript is None:
            logger.warning(f"--transcript is only recorded for {REPLAYABLE}; nothing written")
        else:
            save_transcript(transcript, settings.transcript, settings, plan, g)
    return rows, plan


# ---------------------------------------------------------------- transcripts

def _meta_path(path: Union[str, Path]) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def save_transcript(transcript: Transcript, path: Union[str, Path], settings: RunSettings, plan: Plan,
                    g: AnyGraph) -> Path:
    """Write the JSON-lines transcript plus a sidecar with the public parameters needed to replay it."""
    saved = transcript.save(path)
    meta = {
        "algo": settings.algo,
        "n": g.n,
        "costs": [str(c) for c in g.costs] if isinstance(g, NodeWeightedGraph) else None,
        "c_max": str(g.c_max) if isinstance(g, NodeWeightedGraph) else None,
        "T": plan.T,
        "varsigma": plan.varsigma,
        "eps_per_round": plan.eps_per_round,
        "c": settings.c,
        "beta": settings.beta,
        "eta": settings.eta,
    }
    _meta_path(saved).write_text(json.dumps(meta, indent=2), encoding="utf-8")
    return saved


def _replay_protocol(meta: Dict[str, Any]) -> Tuple[Callable, int, Optional[List[float]]]:
    algo = meta["algo"]
    if algo == "ledp":
        return (lambda cur: dsg_ledp_protocol(cur, meta["T"], meta["varsigma"], meta["c"])), meta["n"], None
    if algo == "weighted":
        costs = [float(Fraction(c)) for c in meta["costs"]]
        c_max = float(Fraction(meta["c_max"]))
        return (
            lambda cur: weighted_dsg_ledp_protocol(cur, meta["T"], meta["varsigma"], c=meta["c"], beta=meta["beta"],
                                                   c_max=c_max)
        ), meta["n"], costs
    if algo == "directed":
        return (
            lambda cur: directed_dsg_ledp_protocol(cur, meta["T"], meta["varsigma"], c=meta["c"], beta=meta["beta"])
        ), 2 * meta["n"], None
    if algo == "pure":
        eps_per_round = float(meta["eps_per_round"])
        return (lambda cur: simple_pure_ledp_protocol(cur, eps_per_round, meta["eta"])), meta["n"], None
    raise InvalidArgumentError(f"transcripts of --algo {algo} cannot be replayed")


def replay_transcript(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Re-run the curator program over a saved transcript.

    Raises:
        ProtocolError: the transcript does not match the curator program
    """
    meta_file = _meta_path(path)
    if not meta_file.exists():
        raise InvalidArgumentError(f"missing replay metadata {meta_file}")
    meta = json.loads(meta_file.read_text(encoding="utf-8"))
    transcript = Transcript.load(path)
    protocol, n, costs = _replay_protocol(meta)
    output = replay(transcript, protocol, n, costs)
    if meta["algo"] == "pure":
        vertices, estimate = output.vertices, output.estimate
    else:
        chosen, estimate, _ = output
        vertices = chosen if meta["algo"] != "directed" else chosen[0] | frozenset(v + meta["n"] for v in chosen[1])
    logger.info(f"replayed {len(transcript)} transcript entries for {meta['algo']}")
    return {
        "algo": meta["algo"],
        "entries": len(transcript),
        "collect_rounds": transcript.collect_rounds,
        "noisy_density": float(estimate),
        "set_size": len(vertices),
        "verified": True,
    }


# ---------------------------------------------------------------- result files

def results_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(rows)


def write_results(rows: List[Dict[str, Any]], out: Optional[Union[str, Path, TextIO]], fmt: str = "csv",
                  reveal_truth: bool = False) -> None:
    """
    Single writer for result rows. With ``reveal_truth`` the CSV starts with a
    comment line carrying the non-private header; JSON carries it as a field.
    """
    frame = results_frame(rows)
    if fmt == "csv":
        text = frame.to_csv(index=False)
        if reveal_truth:
            text = f"# {NON_PRIVATE_HEADER}: true_density and lambda_star are computed from the private graph\n" + text
    elif fmt == "json":
        payload: Dict[str, Any] = {"rows": json.loads(frame.to_json(orient="records"))}
        if reveal_truth:
            payload = {"header": NON_PRIVATE_HEADER, **payload}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        raise InvalidArgumentError(f"unknown output format {fmt!r}; expected csv or json")
    if out is None or out == "-":
        sys.stdout.write(text)
    elif hasattr(out, "write"):
        out.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(rows)} result rows to {path}")


def read_results(path: Union[str, Path]) -> pd.DataFrame:
    path = Path(path)
    if path.suffix == ".json":
        payload = json.loads(path.read_text(encoding="utf-8"))
        return pd.DataFrame(payload["rows"])
    return pd.read_csv(path, comment="#")
