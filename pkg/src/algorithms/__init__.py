"""
Private densest-subgraph algorithms.
"""
from .results import DensityResult, DirectedResult
from .dsg_private import (
    MwuConfig,
    MwuOutcome,
    peeling,
    nop_mwu,
    dsg_ledp_core,
    dsg_ledp,
    centralized_dsg_core,
    centralized_dsg,
    ps_select,
    default_T,
)
from .dsg_weighted import (
    LambdaGrid,
    weighted_peeling,
    weighted_nop_mwu,
    plp_feasibility_margin,
    is_plp_feasible,
    threshold_sets,
    best_threshold_set,
    weighted_dsg_ledp,
    centralized_weighted_core,
    centralized_weighted_dsg,
)
from .dsg_directed import (
    BipartiteLift,
    lift,
    lifted_density_squared,
    directed_dsg_ledp,
    centralized_directed_core,
    centralized_directed_dsg,
)
from .pure_peel import PeelRound, simple_pure_ledp, eps_per_round_for_total, round_bound
from .density_value import (
    ClampedDensity,
    clamp_level,
    rho_x,
    private_density_value,
    rho_x_sensitivity_check,
    separation_report,
)

__all__ = [
    'DensityResult',
    'DirectedResult',
    'MwuConfig',
    'MwuOutcome',
    'peeling',
    'nop_mwu',
    'dsg_ledp_core',
    'dsg_ledp',
    'centralized_dsg_core',
    'centralized_dsg',
    'ps_select',
    'default_T',
    'LambdaGrid',
    'weighted_peeling',
    'weighted_nop_mwu',
    'plp_feasibility_margin',
    'is_plp_feasible',
    'threshold_sets',
    'best_threshold_set',
    'weighted_dsg_ledp',
    'centralized_weighted_core',
    'centralized_weighted_dsg',
    'BipartiteLift',
    'lift',
    'lifted_density_squared',
    'directed_dsg_ledp',
    'centralized_directed_core',
    'centralized_directed_dsg',
    'PeelRound',
    'simple_pure_ledp',
    'eps_per_round_for_total',
    'round_bound',
    'ClampedDensity',
    'clamp_level',
    'rho_x',
    'private_density_value',
    'rho_x_sensitivity_check',
    'separation_report',
]
