"""
Graph package initialization.
"""
from .graphs import Graph, NodeWeightedGraph, DirectedGraph, Ordering, lift_costs
from .density import (
    density,
    weighted_density,
    directed_density,
    directed_density_squared,
    induced_edges,
    cross_edges,
    peel_counts,
    best_prefix,
)
from .generators import gnp, directed_gnp, planted_dense, planted_directed, unit_costs, random_costs
from .edge_list import EdgeList, parse_edge_list, read_edge_list, format_edge_list, write_edge_list

__all__ = [
    'Graph',
    'NodeWeightedGraph',
    'DirectedGraph',
    'Ordering',
    'lift_costs',
    'density',
    'weighted_density',
    'directed_density',
    'directed_density_squared',
    'induced_edges',
    'cross_edges',
    'peel_counts',
    'best_prefix',
    'gnp',
    'directed_gnp',
    'planted_dense',
    'planted_directed',
    'unit_costs',
    'random_costs',
    'EdgeList',
    'parse_edge_list',
    'read_edge_list',
    'format_edge_list',
    'write_edge_list',
]
