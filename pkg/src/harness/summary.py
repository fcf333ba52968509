"""
Aggregation of result rows: density-gap statistics per algorithm and the
acceptance table against the utility bounds with a fixed constant.
"""
import json
import math
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd

from .. import config
from ..utils.error_handler import InvalidArgumentError
from ..utils.logger import get_logger
from .runner import read_results

logger = get_logger(__name__)

QUANTILES = (0.1, 0.5, 0.9)


def _reference(frame: pd.DataFrame) -> pd.Series:
    """Per-row reference optimum: --reference-density when given, else the exact lambda*."""
    ref = frame["lambda_ref"] if "lambda_ref" in frame else pd.Series(np.nan, index=frame.index)
    if "lambda_star" in frame:
        ref = ref.fillna(frame["lambda_star"])
    return ref.astype(float)


def _param(params: str, key: str, default: float) -> float:
    try:
        return float(json.loads(params).get(key, default))
    except (TypeError, ValueError):
        return default


def acceptance_bound(row: pd.Series, reference: float, acceptance_c: float) -> float:
    """
    Lower bound on the returned set's density for one row, or NaN when no
    bound applies (unknown reference, non-private run, algorithm without a
    stated bound).
    """
    eps, delta, n = row.get("eps"), row.get("delta"), row.get("n")
    if reference is None or math.isnan(reference) or eps is None or not eps > 0 or math.isinf(eps):
        return math.nan
    log_n = math.log(n)
    algo = row["algo"]
    if algo == "ledp":
        return reference - acceptance_c * log_n * math.sqrt(math.log(1.0 / delta)) / eps
    if algo == "centralized":
        return reference - acceptance_c * math.sqrt(log_n * math.log(n / delta)) / eps
    if algo == "pure":
        eta = _param(row.get("params", "{}"), "eta", config.DEFAULT_ETA)
        return reference / (2.0 * (1.0 + eta)) - acceptance_c * log_n ** 2 / (eps * eta)
    return math.nan


def value_separation(frame: pd.DataFrame) -> pd.DataFrame:
    """Density-value rows: absolute error against the whp and expectation error scales."""
    rows = frame[frame["algo"] == "value"]
    if rows.empty or "true_density" not in rows:
        return pd.DataFrame()
    out = []
    for (n, eps, params), group in rows.groupby(["n", "eps", "params"], sort=True):
        errors = (group["noisy_density"] - group["true_density"]).abs()
        mode = json.loads(params).get("mode", "whp")
        scale = 5.0 * math.sqrt(math.log(n) / eps) if mode == "whp" else 3.0 * math.sqrt(1.0 / eps)
        out.append({
            "n": n,
            "eps": eps,
            "mode": mode,
            "trials": len(group),
            "mean_abs_error": float(errors.mean()),
            "error_scale": scale,
            "within_scale_rate": float((errors <= scale).mean()),
        })
    return pd.DataFrame(out)


def summarize(
    source: Union[str, Path, pd.DataFrame],
    acceptance_c: Optional[float] = None,
) -> Dict[str, pd.DataFrame]:
    """
    Aggregate result rows by algorithm.

    Args:
        source: Result file (CSV or JSON written by ``run``) or a frame of rows
        acceptance_c: Constant standing in for the hidden factors of the bounds

    Returns:
        ``{"gaps": ..., "acceptance": ..., "value": ...}`` frames

    Raises:
        InvalidArgumentError: no rows
    """
    acceptance_c = config.ACCEPTANCE_C if acceptance_c is None else acceptance_c
    frame = source.copy() if isinstance(source, pd.DataFrame) else read_results(source)
    if frame.empty:
        raise InvalidArgumentError("nothing to summarize: the result file has no rows")
    frame = frame[frame["algo"] != "oracle"]
    if frame.empty:
        raise InvalidArgumentError("nothing to summarize: only oracle rows present")

    frame = frame.assign(reference=_reference(frame))
    if "true_density" in frame:
        frame["gap"] = frame["reference"] - frame["true_density"].astype(float)
    else:
        frame["gap"] = np.nan

    gaps = frame.groupby("algo", sort=True).agg(
        trials=("noisy_density", "size"),
        mean_noisy=("noisy_density", "mean"),
        mean_gap=("gap", "mean"),
        median_gap=("gap", "median"),
        **{f"gap_q{int(q * 100)}": ("gap", lambda s, q=q: s.quantile(q)) for q in QUANTILES},
        zcdp_total=("zcdp_total", "first"),
        eps_at_delta=("eps_at_delta", "first"),
    ).reset_index()

    acceptance_rows = []
    for algo, group in frame.groupby("algo", sort=True):
        bounds = np.array([acceptance_bound(row, row["reference"], acceptance_c) for _, row in group.iterrows()])
        if np.isnan(bounds).all() or "true_density" not in group:
            continue
        achieved = group["true_density"].astype(float).to_numpy()
        checked = ~np.isnan(bounds)
        successes = int((achieved[checked] >= bounds[checked]).sum())
        rate = successes / int(checked.sum())
        acceptance_rows.append({
            "algo": algo,
            "trials": int(checked.sum()),
            "successes": successes,
            "success_rate": rate,
            "mean_bound": float(np.mean(bounds[checked])),
            "acceptance_c": acceptance_c,
            "passed": rate >= 0.9,
        })
    acceptance = pd.DataFrame(
        acceptance_rows,
        columns=["algo", "trials", "successes", "success_rate", "mean_bound", "acceptance_c", "passed"],
    )
    logger.info(f"summarized {len(frame)} rows over {frame['algo'].nunique()} algorithms")
    return {"gaps": gaps, "acceptance": acceptance, "value": value_separation(frame)}


def format_summary(tables: Dict[str, pd.DataFrame]) -> str:
    parts = []
    for name in ("gaps", "acceptance", "value"):
        table = tables.get(name)
        if table is None or table.empty:
            continue
        parts.append(f"== {name} ==\n{table.to_string(index=False)}")
    return "\n\n".join(parts) + "\n"
