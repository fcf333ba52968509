"""
Exact and greedy densest-subgraph oracles.
"""
from .baselines import (
    OracleResult,
    DirectedOracleResult,
    exact_dsg,
    exact_dsg_bruteforce,
    exact_dsg_flow,
    charikar_greedy,
    weighted_greedy,
)
from .cache import OracleCache

__all__ = [
    'OracleResult',
    'DirectedOracleResult',
    'exact_dsg',
    'exact_dsg_bruteforce',
    'exact_dsg_flow',
    'charikar_greedy',
    'weighted_greedy',
    'OracleCache',
]
