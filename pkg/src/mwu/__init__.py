"""
Multiplicative-weights package initialization.
"""
from .hedge import HedgeState, hedge_distribution, hedge_update, RegretReport, regret_report, run_noisy_hedge

__all__ = [
    'HedgeState',
    'hedge_distribution',
    'hedge_update',
    'RegretReport',
    'regret_report',
    'run_noisy_hedge',
]
