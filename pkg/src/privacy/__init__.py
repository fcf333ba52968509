"""
Privacy package initialization.
"""
from .samplers import RngStreams, gaussian_sample, sym_geometric_sample, laplace_sample, geometric_count
from .budget import (
    PrivacyBudget,
    EpsDelta,
    NoiseSpec,
    zcdp_to_epsdelta,
    zcdp_to_epsdelta_numeric,
    sigma_for_target,
    ps_select_epsilon,
    repetitions,
    lambda_grid_size,
    weighted_units,
    t_grid,
    t_grid_size,
    directed_units,
    arithmetic_spacing,
    arithmetic_grid_size,
    directed_arithmetic_grid_size,
)
from .accountant import PrivacyAccountant, LedgerEntry, compose_sequential, compose_parallel, mechanism_cost

__all__ = [
    'RngStreams',
    'gaussian_sample',
    'sym_geometric_sample',
    'laplace_sample',
    'geometric_count',
    'PrivacyBudget',
    'EpsDelta',
    'NoiseSpec',
    'zcdp_to_epsdelta',
    'zcdp_to_epsdelta_numeric',
    'sigma_for_target',
    'ps_select_epsilon',
    'repetitions',
    'lambda_grid_size',
    'weighted_units',
    't_grid',
    't_grid_size',
    'directed_units',
    'arithmetic_spacing',
    'arithmetic_grid_size',
    'directed_arithmetic_grid_size',
    'PrivacyAccountant',
    'LedgerEntry',
    'compose_sequential',
    'compose_parallel',
    'mechanism_cost',
]
