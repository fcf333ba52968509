"""
Configuration settings for the private densest-subgraph toolkit.
"""

import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Base directories
BASE_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.getenv("DSG_DATA_DIR", BASE_DIR / "data"))
RESULTS_DIR = DATA_DIR / "results"
LOG_DIR = Path(os.getenv("DSG_LOG_DIR", BASE_DIR / "logs"))

# Create directories if they don't exist
for directory in [DATA_DIR, RESULTS_DIR, LOG_DIR]:
    directory.mkdir(exist_ok=True, parents=True)

# Logging
LOG_LEVEL = os.getenv("DSG_LOG_LEVEL", "INFO").upper()
LOG_FILE_MAX_BYTES = int(os.getenv("DSG_LOG_MAX_BYTES", str(10 * 1024 * 1024)))
LOG_FILE_BACKUPS = int(os.getenv("DSG_LOG_BACKUPS", "5"))

# Oracle cache settings
ORACLE_CACHE_PATH = DATA_DIR / "oracle_cache.json"
ENABLE_ORACLE_CACHE = os.getenv("DSG_ORACLE_CACHE", "true").lower() == "true"

# Algorithm defaults
DEFAULT_C = float(os.getenv("DSG_DEFAULT_C", "1"))  # repetition constant c
DEFAULT_BETA = float(os.getenv("DSG_DEFAULT_BETA", "0.1"))  # grid slack
DEFAULT_ETA = float(os.getenv("DSG_DEFAULT_ETA", "0.1"))  # pure peeling slack
DEFAULT_DELTA = float(os.getenv("DSG_DEFAULT_DELTA", "1e-6"))
T_CAP = int(os.getenv("DSG_T_CAP", "10000000"))  # hard cap on MWU rounds

# Acceptance constant replacing hidden O(.) factors in reports
ACCEPTANCE_C = float(os.getenv("DSG_ACCEPTANCE_C", "10"))

# Oracle limits
BRUTEFORCE_LIMIT = int(os.getenv("DSG_BRUTEFORCE_LIMIT", "20"))
DIRECTED_BRUTEFORCE_LIMIT = int(os.getenv("DSG_DIRECTED_BRUTEFORCE_LIMIT", "5"))
FLOW_LIMIT = int(os.getenv("DSG_FLOW_LIMIT", "5000"))

# Harness settings
N_JOBS = int(os.getenv("DSG_N_JOBS", "1"))

SETTING_DEFAULTS: Dict[str, Any] = {
    "c": DEFAULT_C,
    "beta": DEFAULT_BETA,
    "eta": DEFAULT_ETA,
    "delta": DEFAULT_DELTA,
    "T_cap": T_CAP,
    "n_jobs": N_JOBS,
    "acceptance_c": ACCEPTANCE_C,
}


def _coerce(value: str) -> Union[int, float, bool, str]:
    lowered = value.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            continue
    return value


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a simple key=value configuration file.

    Blank lines and lines starting with '#' are ignored. Values are coerced to
    bool, int or float when they parse as such.

    Args:
        path: Path to the configuration file

    Returns:
        Mapping of setting name to value
    """
    settings: Dict[str, Any] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            settings[key.replace("-", "_")] = _coerce(value)
    return settings


def resolve_settings(
    flags: Optional[Mapping[str, Any]] = None,
    config_path: Optional[Union[str, Path]] = None,
) -> Dict[str, Any]:
    """
    Merge settings with precedence flags > config file > defaults.

    Flags whose value is None are treated as unset.
    """
    merged = dict(SETTING_DEFAULTS)
    if config_path is not None:
        merged.update(load_config_file(config_path))
    for key, value in (flags or {}).items():
        if value is not None:
            merged[key] = value
    return merged
